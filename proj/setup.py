import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out_path = Path.cwd() / self.get_ext_fullpath(ext.name)
        out_path.parent.mkdir(parents=True, exist_ok=True)

        build_temp = Path(self.build_temp).resolve()
        build_temp.mkdir(parents=True, exist_ok=True)

        config = "Debug" if self.debug else "Release"
        configure_args = [
            f"-DCMAKE_BUILD_TYPE={config}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DGWP_BUILD_PYTHON=ON",
            "-DGWP_BUILD_TESTS=OFF",
        ]
        subprocess.run(
            ["cmake", ext.sourcedir, *configure_args], cwd=build_temp, check=True
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "--parallel"],
            cwd=build_temp,
            check=True,
        )

        built = sorted((build_temp / "python" / "gwpdyn").glob("_core*.so"))
        if not built:
            raise RuntimeError("cmake did not produce the _core module")
        self.copy_file(os.fspath(built[-1]), os.fspath(out_path))


setup(
    ext_modules=[CMakeExtension("gwpdyn._core", sourcedir=".")],
    cmdclass={"build_ext": CMakeBuild},
)
