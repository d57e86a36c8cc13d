"""Utility modules for the phase-transition lab"""
