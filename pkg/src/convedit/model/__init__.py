from .config import FROZEN_EXTERNAL, TRAINABLE_TABLE, ModelConfig
from .checkpoint import load_checkpoint, quantize_roundtrip, save_checkpoint
from .decode import decode_output
from .labels import LabelTensors, labels_from_program
from .loss import LossBreakdown, batch_loss, batch_loss_and_grads, compute_loss
from .network import forward_batch, forward_single, init_parameters, trainable_names
from .rewriter import Rewriter
from .train import evaluate_exact_match, train
from .vocab import PAD_ID, SEP_ID, UNK_ID, Vocabulary

__all__ = [
    "FROZEN_EXTERNAL", "TRAINABLE_TABLE", "ModelConfig",
    "load_checkpoint", "quantize_roundtrip", "save_checkpoint",
    "decode_output", "LabelTensors", "labels_from_program",
    "LossBreakdown", "batch_loss", "batch_loss_and_grads", "compute_loss",
    "forward_batch", "forward_single", "init_parameters", "trainable_names",
    "Rewriter", "evaluate_exact_match", "train",
    "PAD_ID", "SEP_ID", "UNK_ID", "Vocabulary",
]
