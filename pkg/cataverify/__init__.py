"""
Contract verification for constrained Horn clauses over algebraic data types,
by transformation into ADT-free clauses using catamorphism contracts.
"""
