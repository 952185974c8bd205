__all__ = ['registers', 'fixedPoint', 'sparseState', 'arithmetic', 'oracles', 'phaseEstimation']
