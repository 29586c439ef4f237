"""A simply-typed higher-order combinator language with two evaluators.

``hof.rewrite`` normalizes terms by leftmost-outermost rewriting;
``hof.machine`` realizes the same terms as boards of plugs and sockets,
reconfigures links until only first-order wiring remains, and runs it as
dataflow.  ``hof.netlist`` exports the result.
"""

from .parser import parse, parse_program
from .typecheck import typecheck

__all__ = ["parse", "parse_program", "typecheck"]
