# __init__.py - Figure presets shipped as package data
