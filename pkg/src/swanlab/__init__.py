"""Exact computations with Swan modules, psi maps and Milnor patching.

Modules:

* :mod:`swanlab.lin` -- integer matrices, Hermite and Smith forms, lattices
* :mod:`swanlab.grp` -- cyclic, dihedral and quaternion groups, Aut(G)
* :mod:`swanlab.rings` -- rings by structure constants and their maps
* :mod:`swanlab.gring` -- group rings, Swan modules, iso_search, psi
* :mod:`swanlab.quat` -- quaternion orders and their unit groups
* :mod:`swanlab.milnor` -- Milnor squares, patched modules, double cosets
* :mod:`swanlab.cli` -- the ``swanlab`` command
"""

__version__ = "0.1.0"
