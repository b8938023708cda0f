from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "qcrb._qcrb",
    sources=[
        "src/matkit.cpp",
        "src/quantum.cpp",
        "src/information.cpp",
        "src/design.cpp",
        "src/estimation.cpp",
        "src/cli.cpp",
        "src/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(
    packages=["qcrb"],
    package_dir={"": "python"},
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
)
