"""Ring-lattice encryption with equality tests under per-user and per-ciphertext authorization."""

from ._backend import BACKEND
from .errors import (BindingMismatch, CodecError, DimensionError, ExhaustedRejection, InvalidParams,
                     NonPositiveDefinite, NotInvertible, PkeetError, PreimageCheckFailed, Rejected,
                     TagNotInvertible, VariantMismatch)
from .params import Params, preset, validate
from .rng import Rng
from .scheme import (AuthTrapdoor, Ciphertext, PublicKey, SecretKey, Variant, decrypt, encrypt, setup,
                     td1, td2, td3_i, td3_j, test1, test2, test3)

__version__ = "0.1.0"
