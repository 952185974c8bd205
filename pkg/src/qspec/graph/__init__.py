__all__ = ['laplacian', 'spectral']
