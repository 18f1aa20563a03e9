"""Checkpoint encoding for approximators.

Each network is stored as an ``.npz`` archive holding:

- ``format_version``: int, currently 1
- ``layer_sizes``: int64 vector
- ``output_activation``: activation tag string
- ``output_scale``: float64 scalar
- ``params``: float64 flat parameter vector (bit-exact)

A bundle is a directory with one archive per role plus ``manifest.yaml``.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np
import yaml

from ..errors import CheckpointError
from .network import Activation, Approximator

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.yaml"

PathLike = Union[str, Path]


def save_approximator(net: Approximator, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as handle:
        np.savez(
            handle,
            format_version=np.int64(FORMAT_VERSION),
            layer_sizes=np.asarray(net.layer_sizes, dtype=np.int64),
            output_activation=np.str_(net.output_activation.value),
            output_scale=np.float64(net.output_scale),
            params=net.params,
        )
    return path


def load_approximator(path: PathLike) -> Approximator:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"checkpoint file not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            version = int(archive["format_version"])
            if version != FORMAT_VERSION:
                raise CheckpointError(f"{path}: unsupported format version {version}")
            return Approximator(
                layer_sizes=archive["layer_sizes"].tolist(),
                output_activation=Activation(str(archive["output_activation"])),
                output_scale=float(archive["output_scale"]),
                params=archive["params"],
            )
    except (KeyError, ValueError, OSError) as e:
        raise CheckpointError(f"{path}: unreadable checkpoint ({e})") from e


def save_bundle(
    directory: PathLike, networks: Mapping[str, Approximator], metadata: Dict[str, Any]
) -> Path:
    """Write every network plus a manifest naming their roles.

    Args:
        directory: Target directory (created if missing)
        networks: Role name to network
        metadata: Extra manifest entries (env kind, timestep, ...)

    Returns:
        Path to the manifest
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    roles = {}
    for role, net in networks.items():
        filename = f"{role}.npz"
        save_approximator(net, directory / filename)
        roles[role] = filename

    manifest = {"format_version": FORMAT_VERSION, "roles": roles, **metadata}
    manifest_path = directory / MANIFEST_NAME
    with open(manifest_path, "w", encoding="utf-8") as handle:
        yaml.safe_dump(manifest, handle, sort_keys=True)
    return manifest_path


def load_bundle(directory: PathLike) -> Tuple[Dict[str, Approximator], Dict[str, Any]]:
    """Read a bundle written by save_bundle.

    Returns:
        (role -> network, manifest)
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise CheckpointError(f"no {MANIFEST_NAME} in {directory}")
    with open(manifest_path, encoding="utf-8") as handle:
        manifest = yaml.safe_load(handle) or {}
    roles = manifest.get("roles")
    if not isinstance(roles, dict):
        raise CheckpointError(f"{manifest_path}: manifest has no roles")
    networks = {role: load_approximator(directory / filename) for role, filename in roles.items()}
    return networks, manifest
