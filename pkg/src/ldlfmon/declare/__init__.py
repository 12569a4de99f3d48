"""Declare process constraints on top of the LDLf toolkit."""
from .metaconstraints import *  # noqa: F401,F403
from .model import *  # noqa: F401,F403
from .patterns import *  # noqa: F401,F403
from . import metaconstraints as _m, model as _model, patterns as _p

__all__ = [*_p.__all__, *_m.__all__, *_model.__all__]
