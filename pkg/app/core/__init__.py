"""Numerical engines and simulators"""
