"""Tests for the p-Dirac toolkit"""
