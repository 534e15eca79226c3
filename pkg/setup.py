"""Build script: compiles the optional Cython kernels.

The package works without them (see ``qpcavity.kernels``), so a missing
compiler or Cython install only produces a warning.
"""
import os
import sys

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("QPCAVITY_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext = [
            Extension(
                "qpcavity._kernels",
                ["src/qpcavity/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffast-math"],
                # glibc's vector math library backs the vectorized exp loop
                libraries=["mvec"] if sys.platform.startswith("linux") else [],
                optional=True,
            )
        ]
        ext_modules = cythonize(ext, compiler_directives={"language_level": "3"})
    except ImportError as exc:  # pragma: no cover - depends on build env
        print(f"warning: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
