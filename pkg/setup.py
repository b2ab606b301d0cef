import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("HAUSDORFF_HYPERSPACE_NO_EXT"):
    extensions = [
        Extension(
            "hausdorff_hyperspace._ckernels",
            ["src/hausdorff_hyperspace/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            # bit-exact agreement with the numpy oracle: no FMA contraction, no fast-math
            extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
    ]
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
