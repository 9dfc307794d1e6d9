from typing import Iterable

from prometheus_client.metrics import MetricWrapperBase

from skunroll.common.typing import DictStrAny, StrAny


def get_metrics_from_prometheus(collectors: Iterable[MetricWrapperBase]) -> StrAny:
    """Flattens current samples into `name[_label values]: value`. Counters drop the `_total` suffix"""
    metrics: DictStrAny = {}
    for collector in collectors:
        for family in collector.collect():
            for sample in family.samples:
                if sample.name.endswith("_created"):
                    continue
                key = family.name if sample.name == family.name + "_total" else sample.name
                if sample.labels:
                    key += "_" + "_".join(sample.labels.values())
                metrics[key] = sample.value
    return metrics


def get_logging_extras(collectors: Iterable[MetricWrapperBase]) -> StrAny:
    return {"metrics": get_metrics_from_prometheus(collectors)}
