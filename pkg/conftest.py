import numpy

# The doctests were written against numpy 1.x scalar reprs (requirements.txt pins numpy==1.26.4);
# numpy >= 2 prints np.float64(...) instead, so use the legacy repr when running under numpy 2.
if int(numpy.__version__.split(".")[0]) >= 2:
    numpy.set_printoptions(legacy="1.25")
