"""
ForestWise services: the operations on the domain models.
"""
