"""
Test suite for deerpsim.

Unit tests per module, integration tests over whole runs, and shared
topology fixtures.
"""
