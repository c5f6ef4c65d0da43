import os
import sys

# a plain CMake build puts the package in build/python
build = os.environ.get("DSCRYPT_BUILD_DIR")
if build:
    sys.path.insert(0, os.path.join(build, "python"))
