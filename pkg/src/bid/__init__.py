"""Two-sorted bounded arithmetic: formulas, evaluation, a string function
library, fixed-point and period iteration of operators, and a compiler from
resource-bounded Turing machines to operators."""
from .bitstr import EMPTY, BitStr, HyperStr
from .engine import (
    Operator, PeriodReport, Verdict, check_composition, find_fixpoint_inflationary,
    find_period, is_inflationary, iterate, iterate_trace, step, verify_trace, visited_states,
)
from .errors import (
    BidError, BoundExceeded, DecodeError, MachineFormatError, NotFinal, NotInflationary,
    NotSigmaZero, OutOfSpace, ParseError, ResourceLimit, SortError, UnboundVariable,
)
from .kernels import BACKEND
from .parser import load_definitions, parse_definitions, parse_formula, parse_term, pretty_print
from .semantics import Env, bit_graph, eval_formula, eval_num, eval_str
from .syntax import FormulaClass, PiB, SigmaB, classify, is_sigma0
from .traces import IterationTrace

__version__ = "0.1.0"
