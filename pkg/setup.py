"""Build script: compiles the optional Cython kernel core.

The package works without the extension (a NumPy fallback is selected at
import time), so the build degrades gracefully when Cython is missing.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "spectral_stats._kernels",
                ["src/spectral_stats/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # fp-contract off keeps results bit-identical to the NumPy
                # fallback (no FMA fusing of the stencil multiply-adds)
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
