"""Build hook: compiles the optional arithmetic kernel when Cython and a C
compiler are around, and silently falls back to the pure-Python kernel when
they are not.  Everything in the package works either way; the extension only
makes the hot polynomial loops faster."""

from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler: not an error
            print("skipping optional extension build: %s" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print("skipping optional extension %s: %s" % (ext.name, exc))


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("weildescent._speedups", ["src/weildescent/_speedups.pyx"])
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
