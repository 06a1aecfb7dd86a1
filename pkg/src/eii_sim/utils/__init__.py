"""Utility functions for eii-simulator."""
