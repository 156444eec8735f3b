"""The translation passes between counter machines and distributed automata."""

from .certificate import TranslationCertificate
from .pipeline import Stage, run_chain
from .modular import (ModularEncoding, mod_add, mod_encode, reduce_access,
                      translate_expression_mod)
from .powerset import copyless_to_sumless
from .signs import make_nonnegative
from .skeletons import da_to_copyless
from .tracks import sumless_to_da

__all__ = [
    "ModularEncoding", "TranslationCertificate", "copyless_to_sumless", "da_to_copyless",
    "make_nonnegative", "mod_add", "mod_encode", "reduce_access", "run_chain", "Stage", "sumless_to_da",
    "translate_expression_mod",
]
