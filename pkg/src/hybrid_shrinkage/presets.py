"""Named experiment scenarios."""

import logging

from hybrid_shrinkage.common.config import apply_settings
from hybrid_shrinkage.exceptions import UnknownPresetError
from hybrid_shrinkage.experiments import (
    KNOWN_ETA,
    SURE_GRID,
    AmpConfig,
    SweepConfig,
)

LOGGER = logging.getLogger(__name__)

ETAS = "0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5"

SWEEP_PRESETS = {
    # known sparsity, ST against eBayes
    "fig1": {"family": "half:3", "tuning": KNOWN_ETA, "estimators": "st, eb"},
    "fig2": {"family": "const:3", "tuning": KNOWN_ETA, "estimators": "st, eb"},
    # known sparsity, with the hybrid
    "fig3": {"family": "half:3", "tuning": KNOWN_ETA},
    "fig4": {"family": "const:3", "tuning": KNOWN_ETA},
    # sparsity tuned by SURE on the default grids
    "fig5": {"family": "gauss:1", "tuning": SURE_GRID},
    "fig6": {"family": "laplace:2", "tuning": SURE_GRID},
    "fig7": {"family": "rademacher", "tuning": SURE_GRID},
    "fig8": {"family": "uniform:-1:1", "tuning": SURE_GRID},
    # dimension sweep
    "fig_n": {
        "family": "rademacher",
        "tuning": SURE_GRID,
        "sizes": "50, 100, 200, 500",
    },
}

AMP_PRESETS = {
    "fig9": {"delta": "0.65", "eta": "0.13", "sigma": "1", "family": "gauss:5"},
    "fig10": {"delta": "0.65", "eta": "0.13", "sigma": "1", "family": "uniform:-5:5"},
    "fig11": {"delta": "0.5", "eta": "0.1", "sigma": "0", "family": "rademacher"},
    "fig12": {"delta": "0.5", "eta": "0.05", "sigma": "0.05", "family": "rademacher"},
}


def is_dimension_sweep(name: str) -> bool:
    """True if the preset sweeps the dimension rather than a single ``n``."""
    return name == "fig_n"


def sweep_preset(name: str = None) -> SweepConfig:
    """
    Build the sweep configuration of a named preset.

    Parameters
    ----------
    name : str, optional
        One of ``fig1`` to ``fig8`` or ``fig_n``; None gives the defaults.

    Returns
    -------
    SweepConfig
        A new configuration, free to be overridden.
    """
    config = SweepConfig(etas=[float(eta) for eta in ETAS.split(",")])
    if name is None:
        return config
    if name not in SWEEP_PRESETS:
        raise UnknownPresetError(name, list(SWEEP_PRESETS))
    return apply_settings(config, SWEEP_PRESETS[name])


def amp_preset(name: str = None) -> AmpConfig:
    """
    Build the AMP configuration of a named preset.

    Parameters
    ----------
    name : str, optional
        One of ``fig9`` to ``fig12``; None gives the defaults.

    Returns
    -------
    AmpConfig
        A new configuration with ``scenario`` set to the preset name.
    """
    if name is None:
        return AmpConfig()
    if name not in AMP_PRESETS:
        raise UnknownPresetError(name, list(AMP_PRESETS))
    return apply_settings(AmpConfig(scenario=name), AMP_PRESETS[name])
