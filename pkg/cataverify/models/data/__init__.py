"""
Data interface between the bench command and the history database.
"""

from .bench import *
