"""Minimal dense-tensor arithmetic with reverse-mode differentiation."""

from .checkpoint import load_checkpoint, params_from_doc, params_to_doc, save_checkpoint
from .net import ParameterSet, forward_mlp, forward_mlp_np, init_mlp
from .optim import AdamState, adam_init, adam_step
from .spectral import SpectralEstimate, power_iteration, spectral_norm
from .tensor import (
    ComputationTape,
    Tensor,
    add,
    backward,
    div,
    exp,
    log,
    logsumexp,
    matmul,
    mul,
    neg,
    relu,
    reshape,
    slice_last,
    square,
    sub,
    tanh,
    tmean,
    tsum,
)

__all__ = [
    "AdamState",
    "ComputationTape",
    "ParameterSet",
    "SpectralEstimate",
    "Tensor",
    "adam_init",
    "adam_step",
    "add",
    "backward",
    "div",
    "exp",
    "forward_mlp",
    "forward_mlp_np",
    "init_mlp",
    "load_checkpoint",
    "log",
    "logsumexp",
    "matmul",
    "mul",
    "neg",
    "params_from_doc",
    "params_to_doc",
    "power_iteration",
    "relu",
    "reshape",
    "save_checkpoint",
    "slice_last",
    "spectral_norm",
    "square",
    "sub",
    "tanh",
    "tmean",
    "tsum",
]
