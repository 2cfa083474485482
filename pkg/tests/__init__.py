"""
iquantum Workspace Test Suite
"""
