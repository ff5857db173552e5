"""fpix: encrypted biometric index vault.

Images are reduced to compact signatures (singular values, intensity histogram or
PCA eigenvalues), encrypted under an elliptic-curve hybrid scheme, stored one
record per file, and matched against query images by Euclidean distance after
decryption.
"""

from .image import GrayImage, load_pgm, rotate90, synth_image, to_matrix, translate, write_pgm
from .indexing import (
    IndexMode,
    IndexVector,
    SvdFactors,
    histogram_index,
    index_image,
    pca_index,
    singular_value_index,
    svd,
)
from .matcher import MatchDecision, SimilarityMatrix, decide, euclidean, similarity_matrix, suggest_threshold

__version__ = "0.1.0"
