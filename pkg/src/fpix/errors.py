"""Exception hierarchy shared by every fpix module."""


class FpixError(Exception):
    """Base class for all errors raised by fpix."""


class PgmError(FpixError, ValueError):
    """A PGM byte stream could not be parsed."""


class ConvergenceError(FpixError, ArithmeticError):
    """Jacobi sweeps hit their cap before the off-diagonal test passed."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class CurveError(FpixError, ValueError):
    """Bad curve parameters, an off-curve point or a bad point encoding."""


class CryptoError(FpixError):
    """Base for encryption/decryption failures."""


class IntegrityError(CryptoError):
    """The ciphertext tag did not verify (tampering or wrong key)."""


class MalformedCiphertextError(CryptoError, ValueError):
    """Ciphertext or recovered plaintext is structurally invalid."""


class IndexMismatchError(FpixError, ValueError):
    """Two index vectors of different mode or dimension were compared."""


class StoreError(FpixError):
    """Base for record store failures."""


class InvalidRecordIdError(StoreError, ValueError):
    pass


class RecordExistsError(StoreError):
    pass


class RecordNotFoundError(StoreError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CorruptRecordError(StoreError):
    pass
