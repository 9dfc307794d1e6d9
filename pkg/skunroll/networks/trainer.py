import time
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from prometheus_client import CollectorRegistry, Counter, Gauge

from skunroll.common import logger
from skunroll.common.file_storage import FileStorage
from skunroll.common.telemetry import get_logging_extras
from skunroll.common.utils import derive_seed
from skunroll.imaging.containers import Image, Sinogram
from skunroll.autodiff.adam import AdamState, adam_step
from skunroll.autodiff.ops import mse
from skunroll.autodiff.tensor import Tape, backward
from skunroll.tomo.fbp import TFbpFilter, fbp_reconstruct
from skunroll.tomo.ledger import CostLedger
from skunroll.networks.bank import OperatorBank
from skunroll.networks.configuration import UnrollConfig
from skunroll.networks.exceptions import EmptyDatasetException, TrainingDivergenceException, UnrollParameterException
from skunroll.networks.params import NetworkParams, init_network_params
from skunroll.networks.unrolled import network_forward

TRAINING_LOG_HEADER = "epoch,mean_loss,cumulative_operator_cost,wall_seconds"


class TrainingPair(NamedTuple):
    sinogram: Sinogram
    image: Image


class TrainingLogRow(NamedTuple):
    epoch: int
    mean_loss: float
    cumulative_operator_cost: float
    wall_seconds: float


@dataclass
class TrainingResult:
    params: NetworkParams
    log: List[TrainingLogRow]
    ledger: CostLedger
    losses: List[float] = field(default_factory=list)

    def log_csv(self) -> str:
        lines = [TRAINING_LOG_HEADER] + [f"{r.epoch},{r.mean_loss!r},{r.cumulative_operator_cost!r},{r.wall_seconds!r}" for r in self.log]
        return "\n".join(lines) + "\n"

    def save_log(self, storage: FileStorage, relative_path: str) -> str:
        return storage.save(relative_path, self.log_csv())


def create_gauges(registry: CollectorRegistry) -> List[Gauge]:
    """Training telemetry registered in a per run registry so repeated runs do not collide"""
    return [
        Gauge("skunroll_train_epoch", "Last completed epoch", registry=registry),
        Gauge("skunroll_train_mean_loss", "Mean loss of the last epoch", registry=registry),
        Gauge("skunroll_train_operator_cost", "Accumulated operator cost in full operator equivalents", registry=registry),
        Gauge("skunroll_train_operator_seconds", "Wall time spent in operator products", registry=registry),
    ]


def _initial_images(bank: OperatorBank, pairs: Sequence[TrainingPair], fbp_filter: TFbpFilter) -> List[Image]:
    return [fbp_reconstruct(bank.geometry, p.sinogram, bank.full_grid_side, fbp_filter) for p in pairs]


def train_network(cfg: UnrollConfig,
                  bank: OperatorBank,
                  pairs: Sequence[TrainingPair],
                  epochs: int,
                  lr: float,
                  seed: int,
                  params: Optional[NetworkParams] = None,
                  record_wall_time: bool = False,
                  fbp_filter: TFbpFilter = "ramlak",
                  registry: Optional[CollectorRegistry] = None) -> TrainingResult:
    """Adam on the mean squared error between the network output started from FBP and the ground truth.

    Samples are visited one at a time in an order drawn from `seed` for every epoch. Backpropagated
    operator products are not charged, so the ledger counts forward passes only.
    """
    if not pairs:
        raise EmptyDatasetException()
    if epochs < 0:
        raise UnrollParameterException("epochs", epochs, ">= 0")
    params = params or init_network_params(cfg)
    tensors = params.tensors()
    state = AdamState(lr=lr)
    ledger = CostLedger()
    rng = np.random.default_rng(seed)
    registry = registry or CollectorRegistry()
    gauges = create_gauges(registry)
    epoch_gauge, loss_gauge, cost_gauge, seconds_gauge = gauges
    steps = Counter("skunroll_train_steps", "Optimizer steps taken", registry=registry)
    x0s = _initial_images(bank, pairs, fbp_filter)
    targets = [p.image.values[None].astype(cfg.dtype) for p in pairs]

    log: List[TrainingLogRow] = []
    losses: List[float] = []
    started = time.perf_counter()
    for epoch in range(1, epochs + 1):
        epoch_losses = []
        for step, idx in enumerate(rng.permutation(len(pairs))):
            with Tape() as tape:
                out = network_forward(params, cfg, bank, pairs[idx].sinogram, x0s[idx], ledger, seed=derive_seed(cfg.seed, epoch, step))
                loss = mse(out, targets[idx])
            loss_value = float(loss.values)
            if not np.isfinite(loss_value):
                raise TrainingDivergenceException(epoch, step, loss_value)
            adam_step(state, tensors, backward(tape, loss, tensors))
            steps.inc()
            epoch_losses.append(loss_value)
        mean_loss = float(np.mean(epoch_losses))
        losses.extend(epoch_losses)
        wall = time.perf_counter() - started if record_wall_time else 0.0
        log.append(TrainingLogRow(epoch, mean_loss, float(ledger.accumulated_cost), wall))
        epoch_gauge.set(epoch)
        loss_gauge.set(mean_loss)
        cost_gauge.set(float(ledger.accumulated_cost))
        seconds_gauge.set(ledger.operator_seconds)
        logger.metrics(f"{cfg.variant} epoch {epoch}/{epochs} mean loss {mean_loss:.6g}", extra=get_logging_extras(gauges))
    return TrainingResult(params, log, ledger, losses)
