from .loader import load
from .dumper import dump
