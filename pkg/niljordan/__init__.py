"""
niljordan - bounded-index nilpotent subgroups of finite (semilinear) groups
"""

__version__ = "0.1.0"
