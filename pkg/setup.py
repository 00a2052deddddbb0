from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-python fallbacks in topicaudit.kernels keep the package usable
    # without a compiler toolchain.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("topicaudit._kernels", ["src/topicaudit/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
