"""Build script: compiles the optional geometry kernel extension.

The compiled extension is a pure accelerator. If Cython or a C compiler
is unavailable the build falls back to a pure-Python install and the
package selects the numpy kernels at import time.
"""

import logging

from setuptools import setup

log = logging.getLogger("shotspeak.setup")


def extension_modules():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        log.warning("Cython/numpy unavailable at build time; skipping compiled kernels")
        return []
    ext = Extension(
        "shotspeak._kernels",
        sources=["src/shotspeak/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


try:
    setup(ext_modules=extension_modules())
except SystemExit:
    raise
except Exception:  # compiler missing or broken: install without the extension
    log.warning("compiled kernel build failed; installing pure-Python kernels only")
    setup(ext_modules=[])
