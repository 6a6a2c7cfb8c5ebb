"""Flat ``key = value`` configuration files and their application to models."""

import logging
import pathlib

import traitlets as tl

from hybrid_shrinkage.common.file_handling import _open
from hybrid_shrinkage.exceptions import ConfigParseError, ParameterError
from hybrid_shrinkage.signal import SignalFamily

LOGGER = logging.getLogger(__name__)


def parse_config(text: str, path="<string>") -> dict[str, str]:
    """
    Parse flat configuration text.

    Parameters
    ----------
    text : str
        Lines of ``key = value``; blank lines and ``#`` comments are ignored.
        Keys may use dashes or underscores.
    path : str, optional
        Shown in error messages.

    Returns
    -------
    dict[str, str]
        The raw string values keyed by normalized (underscore) key.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key or not key.isidentifier():
            raise ConfigParseError(path, lineno, f"expected key = value, got '{line}'")
        if key in values:
            raise ConfigParseError(path, lineno, f"duplicate key '{key}'")
        values[key] = value.strip()
    return values


def load_config(path) -> dict[str, str]:
    """Read and parse a configuration file."""
    path = pathlib.Path(path)
    with _open(path, "r") as handle:
        return parse_config(handle.read(), path)


def coerce(model: tl.HasTraits, key: str, text: str):
    """
    Convert a string to the type of one of the model's traits.

    Parameters
    ----------
    model : traitlets.HasTraits
        The model owning the trait.
    key : str
        The trait name.
    text : str
        The raw value; lists are comma separated.

    Returns
    -------
    object
        The converted value, not yet validated by the model.
    """
    if not model.has_trait(key):
        raise ParameterError(
            f"unknown setting '{key}' for {type(model).__name__}, "
            f"valid settings are: {', '.join(sorted(model.trait_names()))}"
        )
    trait = model.traits()[key]
    try:
        if isinstance(trait, tl.Instance) and trait.klass is SignalFamily:
            return SignalFamily.parse(text)
        if isinstance(trait, tl.List):
            parts = [part.strip() for part in text.split(",") if part.strip()]
            return trait.from_string_list(parts)
        return trait.from_string(text)
    except (tl.TraitError, ValueError) as err:
        if isinstance(err, ParameterError):
            raise
        raise ParameterError(f"invalid value for '{key}': '{text}'") from err


def apply_settings(model: tl.HasTraits, settings: dict) -> tl.HasTraits:
    """
    Apply settings to a model in place.

    String values are converted with :func:`coerce`; other values are
    assigned as given. Validation errors surface as ``ParameterError``.

    Parameters
    ----------
    model : traitlets.HasTraits
        The model to update.
    settings : dict
        Trait names mapped to values.

    Returns
    -------
    traitlets.HasTraits
        The updated model.
    """
    converted = {}
    for key, value in settings.items():
        key = key.replace("-", "_")
        converted[key] = coerce(model, key, value) if isinstance(value, str) else value
        if not model.has_trait(key):
            raise ParameterError(f"unknown setting '{key}' for {type(model).__name__}")
    try:
        with model.hold_trait_notifications():
            for key, value in converted.items():
                setattr(model, key, value)
    except tl.TraitError as err:
        raise ParameterError(str(err)) from err
    LOGGER.debug("applied %s to %s", sorted(converted), type(model).__name__)
    return model
