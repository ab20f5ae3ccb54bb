import os
import sys

# Under ctest the module built in the CMake tree is on PYTHONPATH. An editable
# pip install registers an import hook that would shadow it, so drop that hook.
if os.environ.get("SZEGO_EXPECT_BUILD_TREE"):
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_skbc_")]
