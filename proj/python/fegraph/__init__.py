"""Free-energy graph embeddings: distances, similarities, factorization, evaluation."""

try:
    from ._fegraph import *  # noqa: F401,F403  installed package layout
    from ._fegraph import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension directly on sys.path
    from _fegraph import *  # noqa: F401,F403

__version__ = "0.1.0"
