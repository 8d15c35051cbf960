# __init__.py - Test package initialization
"""
Makes the tests directory a Python package
"""
