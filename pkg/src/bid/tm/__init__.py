"""Turing machines, their configuration encoding, and their compilation to operators."""
from .compiler import compile_pspace, compile_ptime, pspace_formula, ptime_formula, run_via_id
from .encoding import Layout, decode_config, encode_config, output
from .machine import Config, Poly, TMSpec, configs, corpus, load_machine, parse_machine, run_direct

__all__ = [
    "Config", "Layout", "Poly", "TMSpec", "compile_pspace", "compile_ptime", "configs",
    "corpus", "decode_config", "encode_config", "load_machine", "output", "parse_machine",
    "pspace_formula", "ptime_formula", "run_direct", "run_via_id",
]
