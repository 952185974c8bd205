"""
QSpec: simulation and verification harness for spectral quantum graph convolution.

The quantum pipeline (state preparation, Grover-based overlap estimation, fixed-point arithmetic and
exchange-test layer readout) runs on a sparse-amplitude simulator and every stage is cross-checked against
a classical oracle.
"""
