# __init__.py - Package initialization
"""
Ad hoc routing simulator - Monte Carlo evaluation of multihop routing
protocols in finite wireless networks with Nakagami fading
"""

__version__ = "0.1.0"
