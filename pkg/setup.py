"""Build the optional compiled kernels.

The package works without them: ``antisymid.backend`` falls back to the
pure-Python kernels when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ANTISYMID_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "antisymid._ckernels",
                    ["src/antisymid/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # bit-identical floats with the numpy kernels
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
