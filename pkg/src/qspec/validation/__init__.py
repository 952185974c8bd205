__all__ = ['denseOracle', 'budgets', 'sweep']
