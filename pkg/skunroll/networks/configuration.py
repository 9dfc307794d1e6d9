from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from skunroll.common.typing import TFloatDtype
from skunroll.autodiff.blocks import DEFAULT_HIDDEN_CHANNELS
from skunroll.networks.exceptions import UnrollParameterException

TVariant = Literal["lpd", "lspd", "sklpd1", "sklpd2", "sklspd1", "sklspd2"]
TSubsetRule = Literal["cyclic", "uniform_random"]
VARIANTS: Tuple[TVariant, ...] = ("lpd", "lspd", "sklpd1", "sklpd2", "sklspd1", "sklspd2")
# share of trailing layers that run on the full operator when no switch layer is given
UNSKETCHED_TAIL = 0.2


@dataclass(frozen=True)
class UnrollConfig:
    """Shape of an unrolled network.

    Sketched variants run layer k on a grid reduced by `layer_factors()[k]`. Without an explicit
    `sketch_schedule` that is `sketch_factor` before `k_switch` and 1 from there on. `num_subsets`
    and the sketch settings are ignored by variants that do not use them.
    """
    num_layers: int = 12
    variant: TVariant = "lpd"
    num_subsets: int = 4
    subset_rule: TSubsetRule = "cyclic"
    sketch_factor: int = 2
    k_switch: Optional[int] = None
    momentum_memory: int = 0
    seed: int = 0
    hidden_channels: int = DEFAULT_HIDDEN_CHANNELS
    dtype: TFloatDtype = "float32"
    sketch_schedule: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.num_layers < 0:
            raise UnrollParameterException("num_layers", self.num_layers, ">= 0")
        if self.variant not in VARIANTS:
            raise UnrollParameterException("variant", self.variant, " or ".join(VARIANTS))
        if self.num_subsets < 1:
            raise UnrollParameterException("num_subsets", self.num_subsets, ">= 1")
        if self.subset_rule not in ("cyclic", "uniform_random"):
            raise UnrollParameterException("subset_rule", self.subset_rule, "cyclic or uniform_random")
        if int(self.sketch_factor) != self.sketch_factor or self.sketch_factor < 1:
            raise UnrollParameterException("sketch_factor", self.sketch_factor, "integer >= 1")
        if self.k_switch is None:
            object.__setattr__(self, "k_switch", self.num_layers - round(UNSKETCHED_TAIL * self.num_layers))
        if not 0 <= self.k_switch <= self.num_layers:
            raise UnrollParameterException("k_switch", self.k_switch, f"value in [0, {self.num_layers}]")
        if self.momentum_memory < 0:
            raise UnrollParameterException("momentum_memory", self.momentum_memory, ">= 0")
        if self.hidden_channels < 1:
            raise UnrollParameterException("hidden_channels", self.hidden_channels, ">= 1")
        if self.dtype not in ("float32", "float64"):
            raise UnrollParameterException("dtype", self.dtype, "float32 or float64")
        if self.sketch_schedule is not None:
            schedule = tuple(int(f) for f in self.sketch_schedule)
            if len(schedule) != self.num_layers or any(f < 1 for f in schedule):
                raise UnrollParameterException("sketch_schedule", self.sketch_schedule, f"{self.num_layers} integers >= 1")
            object.__setattr__(self, "sketch_schedule", schedule)

    @property
    def is_stochastic(self) -> bool:
        return self.variant in ("lspd", "sklspd1", "sklspd2")

    @property
    def is_sketched(self) -> bool:
        return self.variant.startswith("sk")

    @property
    def option(self) -> int:
        """Sampler placement of sketched variants, 1 upsamples the gradient and 2 runs the primal block coarse"""
        return 2 if self.variant.endswith("2") else 1

    @property
    def effective_subsets(self) -> int:
        return self.num_subsets if self.is_stochastic else 1

    def layer_factors(self) -> Tuple[int, ...]:
        if not self.is_sketched:
            return (1,) * self.num_layers
        if self.sketch_schedule is not None:
            return self.sketch_schedule
        return tuple(self.sketch_factor if k < self.k_switch else 1 for k in range(self.num_layers))
