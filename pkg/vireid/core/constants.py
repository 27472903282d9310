"""Core constants: defaults for re-ranking, synthesis and the on-disk format."""


class RerankDefaults:
	K1 = 5              # k-reciprocal neighborhood size
	K2 = 3              # local query expansion size
	LAMBDA1 = 0.8       # feature-distance weight in the fused distance
	LAMBDA2 = 0.1       # cross-temporal weight, calibrated for L=2
	NUM_GROUPS = 2      # temporal groups per tracklet (L)


class RerankPresets:
	DEFAULT = {"k1": 5, "k2": 3, "lambda1": 0.8, "lambda2": 0.1, "num_groups": 2}
	LARGE_GALLERY = {"k1": 20, "k2": 6, "lambda1": 0.3, "lambda2": 0.4, "num_groups": 2}


class SynthDefaults:
	NUM_IDS = 50
	CAMS_PER_ID = 2
	FRAMES_PER_TRACKLET = 10
	DIM = 64
	LATENT_DIM = 8
	IDENTITY_SPREAD = 1.0
	MODALITY_OFFSET_SCALE = 0.5
	CAMERA_OFFSET_SCALE = 0.3
	FRAME_NOISE = 0.1


class ScheduleDefaults:
	COSINE_PHI = 3.0
	EPOCHS = 100


class FormatConstants:
	FORMAT_VERSION = 1
	MANIFEST_NAME = "manifest.json"
	BLOB_NAME = "features.bin"
	FEATURE_DTYPE = "<f4"     # little-endian float32, frame-major
	MATRIX_DTYPE = "<f8"      # distance dumps are little-endian float64
	FLOAT_DECIMALS = 6        # report float formatting
	REPORT_RANKS = (1, 5, 10, 20)


class ExitCodes:
	OK = 0
	CONFIG_ERROR = 2
	DATA_ERROR = 3
	INTERNAL_ERROR = 4


THREADS_ENV_VAR = "VIREID_THREADS"

__all__ = [
	"RerankDefaults",
	"RerankPresets",
	"SynthDefaults",
	"ScheduleDefaults",
	"FormatConstants",
	"ExitCodes",
	"THREADS_ENV_VAR",
]
