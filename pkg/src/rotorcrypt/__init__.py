"""Group-based image cryptosystem built on a Hénon-wired digital rotor machine."""

from .analysis import AnalysisReport, analyze, column_means, entropy, histogram, pixel_change_rate
from .chaos import HenonParams, HenonState, Permutation256, complete_permutation, henon_byte_sequence, henon_iterate
from .errors import *  # noqa: F401,F403
from .imaging import ColorImage, GrayImage, decrypt_image, encrypt_image, to_grayscale
from .keystream import keystream_from_wav
from .machine import Keystream, Machine, Rotor, build_machine
from .sharing import Share, SharingParams, reconstruct, split

__version__ = "0.1.0"
