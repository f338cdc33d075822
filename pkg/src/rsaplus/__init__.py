"""RSA+ alongside textbook RSA and Rabin: keys, schemes, reductions, benchmarks."""

from .errors import RsaPlusError
from .keys import (
    Ciphertext,
    RabinKeyPair,
    RabinPublicKey,
    RsaKeyPair,
    RsaPlusCiphertext,
    RsaPlusPrivateKey,
    RsaPlusPublicKey,
    RsaPublicKey,
    keygen_rabin,
    keygen_rsa,
    keygen_rsaplus,
)
from .schemes import (
    DecryptionCandidate,
    rabin_decrypt,
    rabin_encrypt,
    rsa_decrypt,
    rsa_encrypt,
    rsaplus_decrypt,
    rsaplus_decrypt_qr,
    rsaplus_encrypt,
    rsaplus_encrypt_qr,
)

__version__ = "0.1.0"
