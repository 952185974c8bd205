__all__ = ['convolution', 'emulation']
