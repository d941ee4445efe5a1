"""
Models and data interfaces for the benchmark history.
"""
