"""
Shared numerical plumbing used across the toolkit apps
"""
