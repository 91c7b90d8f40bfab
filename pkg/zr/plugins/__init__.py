from zr.plugins.bin_plugin import BinPlugin  # noqa
from zr.plugins.txt_plugin import TxtPlugin  # noqa
