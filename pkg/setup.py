"""Build script: optionally compiles the search kernel with Cython.

``lambekstar._search`` is plain Python. When Cython and a C compiler are
available we compile that module as-is (pure-Python mode) into an extension
that shadows the ``.py`` at import time; otherwise the package runs on the
interpreted kernel with identical behaviour. ``lambekstar.kernel_backend()``
reports which one actually loaded.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/lambekstar/_search.py"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
