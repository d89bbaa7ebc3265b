import numpy as np
import pytest

import hsltori as h
from hsltori.meshio import project, quad_faces
from conftest import torus


@pytest.fixture
def sample():
    T = torus(1 + 3j, seed=2)
    return _quiet_sample(T)


def _quiet_sample(T):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return h.sample_grid(T, 8, 8)


def test_obj_counts(sample, tmp_path):
    p = h.export_mesh(sample, "obj", "drop4", tmp_path / "t.obj")
    lines = p.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 64
    faces = [l for l in lines if l.startswith("f ")]
    assert len(faces) == 64
    idx = np.array([[int(x) for x in f.split()[1:]] for f in faces])
    assert idx.min() == 1 and idx.max() == 64


def test_ply_counts(sample, tmp_path):
    p = h.export_mesh(sample, "ply", "drop1", tmp_path / "t.ply")
    text = p.read_text()
    assert "element vertex 64" in text and "element face 64" in text
    body = text.split("end_header\n")[1].splitlines()
    assert len(body) == 128


def test_csv4d_roundtrip_exact(sample, tmp_path):
    p = h.export_mesh(sample, "csv4d", path=tmp_path / "t.csv")
    uv, f = h.read_csv4d(p)
    assert np.array_equal(f, sample.f.reshape(-1, 4))
    assert np.array_equal(uv, sample.uv.reshape(-1, 2))


def test_quads_wrap():
    F = quad_faces(3, 4)
    assert F.shape == (12, 4)
    # every vertex is used by exactly four quads on a torus grid
    assert np.all(np.bincount(F.ravel()) == 4)


def test_stereo_falls_back_at_origin(sample):
    with pytest.warns(UserWarning):
        P = project(sample.f.reshape(-1, 4), "stereo")
    assert np.allclose(P, sample.f.reshape(-1, 4)[:, :3])


def test_stereo_lands_on_unit_sphere_image():
    f = np.array([[1.0, 2.0, 0.5, -1.0], [0.0, 0.0, 3.0, 1.0]])
    P = project(f, "stereo")
    x = f / np.linalg.norm(f, axis=1, keepdims=True)
    # inverse stereographic projection recovers x
    r2 = np.sum(P**2, axis=1, keepdims=True)
    back = np.concatenate([2 * P, r2 - 1], axis=1) / (r2 + 1)
    assert np.allclose(back, x)


def test_bad_format_and_path(sample, tmp_path):
    with pytest.raises(ValueError):
        h.export_mesh(sample, "stl")
    with pytest.raises(ValueError):
        project(np.zeros((1, 4)), "drop5")
    with pytest.raises(OSError):
        h.export_mesh(sample, "obj", path=tmp_path / "missing" / "t.obj")
