"""Bundled demo datasets: three simulated three-population studies and a
small field study of tooth-mark widths on six trees."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

__all__ = ["DATASETS", "dataset_paths"]

# name -> (data csv, config json)
DATASETS = {
    "example1": ("example1.csv", "example1.json"),
    "example2": ("example2.csv", "example2.json"),
    "example3": ("example3.csv", "example3.json"),
    "toothmarks": ("toothmarks.csv", "toothmarks.json"),
}


def dataset_paths(name: str) -> tuple[Path, Path]:
    """Filesystem paths of a bundled dataset's data file and config file."""
    try:
        data_name, config_name = DATASETS[name]
    except KeyError:
        raise KeyError(f"unknown dataset {name!r}; available: {sorted(DATASETS)}") from None
    root = resources.files("uncstat").joinpath("data")
    return Path(str(root.joinpath(data_name))), Path(str(root.joinpath(config_name)))
