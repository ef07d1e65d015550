import numpy as np


def nmse(h_hat, h) -> float:
    """Per-realization ``||h_hat - h||^2 / ||h||^2``."""
    h_hat = np.asarray(h_hat)
    h = np.asarray(h)
    if h_hat.shape != h.shape:
        raise ValueError(f"shape mismatch {h_hat.shape} vs {h.shape}")
    ref = float(np.vdot(h, h).real)
    if ref == 0.0:
        raise ValueError("true channel is identically zero")
    err = h_hat - h
    return float(np.vdot(err, err).real) / ref


def to_db(x):
    return 10 * np.log10(x)
