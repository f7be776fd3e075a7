"""Two-sorted propositional toolkit.

Classical and intuitionistic provability, uniform post-interpolation,
unification with parameter-only axioms, projectivity, projective
approximation sets and relativised admissibility.
"""

try:  # packaged layout: extension lives inside the package
    from ._parlog import *  # noqa: F401,F403
    from ._parlog import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension sits on sys.path
    from _parlog import *  # noqa: F401,F403
    from _parlog import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
