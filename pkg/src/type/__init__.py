# Import all types from the separate modules
from .report import *
from .args import *
from .form import *
