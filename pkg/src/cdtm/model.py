"""Parameter containers, their validity rules, and model persistence."""

import json
import struct
from dataclasses import dataclass

import numpy as np

MODEL_FORMAT_VERSION = 1
BINARY_MAGIC = b"CDTM0001"


class ConfigError(ValueError):
    """Raised when a TrainConfig (or CLI configuration) fails validation."""


@dataclass
class ModelParams:
    """Global model state: topic-word distributions and the Dirichlet prior.

    eta is K x V with rows on the simplex; zeta is the length-K Dirichlet
    hyperparameter (held fixed during training).
    """

    eta: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        self.eta = np.asarray(self.eta, dtype=np.float64)
        self.zeta = np.asarray(self.zeta, dtype=np.float64)
        if self.eta.ndim != 2:
            raise ValueError("eta must be a K x V matrix")
        if self.zeta.shape != (self.eta.shape[0],):
            raise ValueError("zeta length must equal the number of topics")
        if np.any(self.zeta <= 0):
            raise ValueError("all zeta entries must be positive")

    @property
    def K(self):
        return self.eta.shape[0]

    @property
    def V(self):
        return self.eta.shape[1]


@dataclass
class DocVariational:
    """Per-document variational state: Dirichlet parameter and word assignments."""

    gamma: np.ndarray  # (K,) positive
    phi: np.ndarray  # (N_d, K) rows on the simplex


@dataclass
class TrainConfig:
    """Settings for the penalized variational EM fit.

    lam is the entropy-penalty weight: a single float applied to every
    document, or a length-D array of per-document weights.  lam=0 recovers
    plain LDA.  zeta=None means the symmetric prior 1/K.
    """

    K: int = 10
    lam: object = 0.0
    zeta: object = None
    em_max_iters: int = 200
    em_rel_tol: float = 1e-6
    estep_max_iters: int = 100
    newton_max_iters: int = 50
    newton_tol: float = 1e-5  # epsilon: per-coordinate stopping threshold
    phi_tol: float = 1e-5  # mean |delta phi| threshold for E-step convergence
    armijo_delta: float = 0.01  # delta: sufficient-decrease constant
    backtrack_rho: float = 0.5  # rho: step-size shrink factor
    max_backtracks: int = 60
    gamma_floor: float = 1e-8
    eta_floor: float = 1e-12
    seed: int = 0

    def validate(self):
        if not isinstance(self.K, (int, np.integer)) or self.K < 2:
            raise ConfigError("K must be an integer >= 2")
        lam = np.atleast_1d(np.asarray(self.lam, dtype=np.float64))
        if lam.ndim != 1 or not np.all(np.isfinite(lam)) or np.any(lam < 0):
            raise ConfigError("lambda weights must be finite and >= 0")
        if self.zeta is not None:
            z = np.asarray(self.zeta, dtype=np.float64)
            if z.shape != (self.K,) or np.any(z <= 0):
                raise ConfigError("zeta override must be a positive length-K vector")
        if not 0.0 < self.armijo_delta < 0.5:
            raise ConfigError("armijo_delta must lie in (0, 0.5)")
        if not 0.0 < self.backtrack_rho < 1.0:
            raise ConfigError("backtrack_rho must lie in (0, 1)")
        for name in ("em_rel_tol", "newton_tol", "phi_tol", "gamma_floor", "eta_floor"):
            if getattr(self, name) <= 0:
                raise ConfigError("%s must be > 0" % name)
        for name in (
            "em_max_iters",
            "estep_max_iters",
            "newton_max_iters",
            "max_backtracks",
        ):
            if getattr(self, name) < 1:
                raise ConfigError("%s must be >= 1" % name)
        if not isinstance(self.seed, (int, np.integer)):
            raise ConfigError("seed must be an integer")
        return self

    def resolved_zeta(self):
        if self.zeta is None:
            return np.full(self.K, 1.0 / self.K)
        return np.asarray(self.zeta, dtype=np.float64).copy()

    def lam_for_doc(self, d):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=np.float64))
        if lam.shape[0] == 1:
            return float(lam[0])
        return float(lam[d])

    def check_lam_length(self, n_docs):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=np.float64))
        if lam.shape[0] not in (1, n_docs):
            raise ConfigError(
                "per-document lambda must have length D=%d, got %d"
                % (n_docs, lam.shape[0])
            )

    def homogeneous_lam(self):
        """The scalar lambda, for persistence; errors on per-document weights."""
        lam = np.atleast_1d(np.asarray(self.lam, dtype=np.float64))
        if lam.shape[0] != 1:
            raise ConfigError("model persistence stores a single homogeneous lambda")
        return float(lam[0])


def init_model(corpus, config, seed=None):
    """Seeded model initialization.

    zeta defaults to the symmetric prior 1/K.  Each eta row is the corpus
    word-frequency vector under multiplicative Gamma(100, 1/100) jitter,
    floored and renormalized, so topics start near the corpus distribution
    but not identical.
    """
    config.validate()
    K, V = config.K, corpus.n_words
    if V < K:
        raise ValueError("vocabulary size %d is smaller than K=%d" % (V, K))
    rng = np.random.default_rng(config.seed if seed is None else seed)
    freq = corpus.word_counts().astype(np.float64)
    freq /= freq.sum()
    eta = freq[None, :] * rng.gamma(100.0, 1.0 / 100.0, size=(K, V))
    eta += config.eta_floor
    eta /= eta.sum(axis=1, keepdims=True)
    return ModelParams(eta, config.resolved_zeta())


def init_doc_variational(doc, config):
    """Starting point of the document E-step: gamma_i = zeta_i + N_d/K, phi uniform."""
    n = len(doc)
    if n < 1:
        raise ValueError("cannot initialize variational state for an empty document")
    K = config.K
    gamma = config.resolved_zeta() + n / K
    phi = np.full((n, K), 1.0 / K)
    return DocVariational(gamma, phi)


# ---------------------------------------------------------------------------
# Persistence: versioned JSON and a compact binary layout.
#
# Binary layout (little-endian): 8-byte magic "CDTM0001", uint64 K, uint64 V,
# float64 lambda, K float64 zeta entries, K*V float64 eta entries row-major.


def save_model_json(model, lam, path):
    payload = {
        "version": MODEL_FORMAT_VERSION,
        "K": model.K,
        "V": model.V,
        "zeta": model.zeta.tolist(),
        "lambda": float(lam),
        "eta": model.eta.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_model_json(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError("unsupported model format version %r" % payload.get("version"))
    eta = np.asarray(payload["eta"], dtype=np.float64)
    if eta.shape != (payload["K"], payload["V"]):
        raise ValueError("eta shape does not match the declared K and V")
    return ModelParams(eta, np.asarray(payload["zeta"])), float(payload["lambda"])


def save_model_binary(model, lam, path):
    K, V = model.K, model.V
    with open(path, "wb") as fh:
        fh.write(BINARY_MAGIC)
        fh.write(struct.pack("<QQd", K, V, float(lam)))
        fh.write(np.ascontiguousarray(model.zeta, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.eta, dtype="<f8").tobytes())


def load_model_binary(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != BINARY_MAGIC:
            raise ValueError("not a model binary: bad magic %r" % magic)
        K, V, lam = struct.unpack("<QQd", fh.read(24))
        zeta = np.frombuffer(fh.read(8 * K), dtype="<f8").astype(np.float64)
        eta = np.frombuffer(fh.read(8 * K * V), dtype="<f8").astype(np.float64)
        if eta.size != K * V:
            raise ValueError("model binary truncated")
    return ModelParams(eta.reshape(K, V), zeta), lam


def save_model(model, lam, path):
    """Dispatch on extension: .json for the JSON container, anything else binary."""
    if str(path).endswith(".json"):
        save_model_json(model, lam, path)
    else:
        save_model_binary(model, lam, path)


def load_model(path):
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == BINARY_MAGIC:
        return load_model_binary(path)
    return load_model_json(path)
