"""Builders for small hand-made splits."""
import numpy as np

from vireid.core.enums import Modality, RetrievalDirection
from vireid.core.models import EvalSplit, TrackletRecord


def record(tracklet_id, frames, person_id=0, camera_id=0, modality=Modality.RGB):
    return TrackletRecord(tracklet_id, person_id, camera_id, modality, np.asarray(frames, dtype=np.float64))


def build_split(query_frames, gallery_frames, q_pids=None, g_pids=None, q_cams=None, g_cams=None):
    """Visible-to-infrared split; ids default to the record index."""
    q_pids = q_pids if q_pids is not None else list(range(len(query_frames)))
    g_pids = g_pids if g_pids is not None else list(range(len(gallery_frames)))
    q_cams = q_cams if q_cams is not None else [0] * len(query_frames)
    g_cams = g_cams if g_cams is not None else [1] * len(gallery_frames)
    queries = tuple(
        record(f"q{i}", f, q_pids[i], q_cams[i], Modality.RGB) for i, f in enumerate(query_frames)
    )
    gallery = tuple(
        record(f"g{j}", f, g_pids[j], g_cams[j], Modality.IR) for j, f in enumerate(gallery_frames)
    )
    return EvalSplit(queries, gallery, RetrievalDirection.VISIBLE_TO_INFRARED)


def random_split(rng, num_queries, num_gallery, frames, dim, num_ids=None):
    """Random tracklets; identities cycle over ``num_ids``."""
    num_ids = num_ids or min(num_queries, num_gallery)
    query_frames = [rng.standard_normal((frames, dim)) for _ in range(num_queries)]
    gallery_frames = [rng.standard_normal((frames, dim)) for _ in range(num_gallery)]
    return build_split(
        query_frames,
        gallery_frames,
        q_pids=[i % num_ids for i in range(num_queries)],
        g_pids=[j % num_ids for j in range(num_gallery)],
    )


def from_distances(dist, q_pids, g_pids, q_cams=None, g_cams=None):
    """A split whose labels match ``dist``; frame content is irrelevant."""
    dist = np.asarray(dist, dtype=np.float64)
    num_q, num_g = dist.shape
    return build_split(
        [np.zeros((1, 2))] * num_q, [np.zeros((1, 2))] * num_g, q_pids, g_pids, q_cams, g_cams
    )
