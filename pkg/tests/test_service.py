import concurrent.futures

import pytest
from fastapi.testclient import TestClient

from bicritical.render import ParameterCBO, RenderJob, Viewport, render
from bicritical.service import ServiceConfig, make_app

CFG = ServiceConfig(tile_px=64, max_zoom=6, default_max_iter=120)


@pytest.fixture(scope="module")
def client():
    return TestClient(make_app(CFG))


class TestVersion:
    def test_version_payload(self, client):
        body = client.get("/api/v1/version").json()
        assert {"version", "config", "tile_px", "max_zoom"} <= set(body)


class TestLocusTile:
    def test_identical_requests_identical_bytes_and_etag(self, client):
        url = "/api/v1/locus-tile?family=cbo&d=2&z=0&x=0&y=0"
        r1, r2 = client.get(url), client.get(url)
        assert r1.status_code == 200
        assert r1.headers["etag"] == r2.headers["etag"]
        assert r1.content == r2.content

    def test_etag_304(self, client):
        url = "/api/v1/locus-tile?family=cbo&d=1&z=1&x=0&y=1"
        first = client.get(url)
        again = client.get(url, headers={"If-None-Match": first.headers["etag"]})
        assert again.status_code == 304

    def test_zoom0_matches_direct_render(self, client):
        r = client.get("/api/v1/locus-tile?family=cbo&d=2&z=0&x=0&y=0")
        job = RenderJob(
            plane=ParameterCBO(d=2),
            viewport=Viewport(center=0j, width=6.0, px_w=64, px_h=64),
            max_iter=120,
        )
        assert r.content == render(job).to_ppm()

    def test_tiles_partition_root(self, client):
        # the four zoom-1 tiles reassemble into the zoom-0 geometry: spot-check
        # that each responds and has the right size header
        for x in (0, 1):
            for y in (0, 1):
                r = client.get(f"/api/v1/locus-tile?family=cbo&d=1&z=1&x={x}&y={y}")
                assert r.status_code == 200
                assert r.content.startswith(b"P6\n64 64\n255\n")

    def test_out_of_range_zoom_422(self, client):
        assert client.get("/api/v1/locus-tile?family=cbo&d=1&z=99&x=0&y=0").status_code == 422
        assert client.get("/api/v1/locus-tile?family=cbo&d=1&z=1&x=5&y=0").status_code == 422

    def test_malformed_400(self, client):
        assert client.get("/api/v1/locus-tile?family=nope&d=1").status_code == 400
        assert client.get("/api/v1/locus-tile?family=cbo&d=0").status_code == 400

    def test_png_format(self, client):
        r = client.get("/api/v1/locus-tile?family=multibrot&d=1&fmt=png")
        assert r.status_code == 200
        assert r.content.startswith(b"\x89PNG")


class TestDynTile:
    def test_unicritical(self, client):
        r = client.get("/api/v1/dyn-tile?kind=unicritical&d=1&c_re=-1&c_im=0")
        assert r.status_code == 200
        assert r.content.startswith(b"P6\n64 64\n255\n")

    def test_monic_from_a(self, client):
        r = client.get("/api/v1/dyn-tile?kind=monic&d=1&a_re=1.5&a_im=0")
        assert r.status_code == 200

    def test_bad_kind(self, client):
        assert client.get("/api/v1/dyn-tile?kind=foo&d=1").status_code == 400


class TestMembershipEndpoint:
    def test_accept(self, client):
        body = client.get("/api/v1/membership?d=1&a_re=1.5&a_im=0").json()
        assert body["outcome"] == "accept"

    def test_reject_with_witness(self, client):
        body = client.get("/api/v1/membership?d=1&a_re=3&a_im=0").json()
        assert body["outcome"] == "reject"
        assert body["witness"]["index"] == 2

    def test_zero_not_repelling_path(self, client):
        body = client.get("/api/v1/membership?d=1&a_re=0.5&a_im=0").json()
        assert body["outcome"] in ("reject", "indeterminate")
        assert body["reason"] == "zero_not_repelling"

    def test_bad_params(self, client):
        assert client.get("/api/v1/membership?d=1&a_re=0&a_im=0").status_code == 400


class TestRayEndpoint:
    def test_landed_at_origin(self, client):
        body = client.get("/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=0/1").json()
        assert body["status"] == "landed"
        assert abs(complex(*body["landing"])) < 1e-6

    def test_half_angle_negates(self, client):
        b0 = client.get("/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=0/1").json()
        b1 = client.get("/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=1/2").json()
        n = min(len(b0["points"]), len(b1["points"]))
        for (x0, y0), (x1, y1) in zip(b0["points"][:n], b1["points"][:n]):
            assert abs(complex(x0, y0) + complex(x1, y1)) <= 1e-6 * max(1.0, abs(complex(x0, y0)))

    def test_malformed_angle_400(self, client):
        assert client.get("/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=1/0").status_code == 400


class TestCenterEndpoint:
    def test_center(self, client):
        body = client.get("/api/v1/center?family=cbo&d=1&period=1&seed_re=1.4").json()
        assert abs(complex(*body["found"]) - 1.5) < 1e-9

    def test_solver_error_payload(self, client):
        body = client.get("/api/v1/center?family=cbo&d=1&period=2&seed_re=0&seed_im=120").json()
        assert "error" in body


class TestStatelessness:
    def test_concurrent_identical_requests(self, client):
        url = "/api/v1/locus-tile?family=cbo&d=1&z=2&x=1&y=2"
        with concurrent.futures.ThreadPoolExecutor(4) as pool:
            bodies = list(pool.map(lambda _: client.get(url).content, range(8)))
        assert all(b == bodies[0] for b in bodies)


class TestRenderJobEndpoint:
    def test_post_job(self, client):
        job = {
            "plane": {"kind": "multibrot", "degree": 2},
            "viewport": {"center": [-0.25, 0.0], "width": 4.0, "px_w": 48, "px_h": 48},
            "max_iter": 80,
            "coloring": "binary",
            "supersample": 1,
        }
        r = client.post("/api/v1/render", json=job)
        assert r.status_code == 200
        assert r.content.startswith(b"P6\n48 48\n255\n")

    def test_post_job_matches_library(self, client):
        from bicritical.render import job_from_json, render as lib_render

        job = {
            "plane": {"kind": "dynamical", "map": "unicritical", "d": 1, "c": [-1.0, 0.0]},
            "viewport": {"center": [0.0, 0.0], "width": 5.0, "px_w": 40, "px_h": 40},
            "max_iter": 100,
        }
        r = client.post("/api/v1/render", json=job)
        assert r.content == lib_render(job_from_json(job)).to_ppm()

    def test_oversized_job_422(self, client):
        job = {
            "plane": {"kind": "cbo", "d": 1},
            "viewport": {"center": [0.0, 0.0], "width": 6.0, "px_w": 4096, "px_h": 4096},
        }
        assert client.post("/api/v1/render", json=job).status_code == 422

    def test_malformed_job_400(self, client):
        assert client.post("/api/v1/render", json={"plane": {"kind": "wat"}}).status_code == 400


class TestOrbitEndpoint:
    def test_orbit_payload(self, client):
        body = client.get("/api/v1/orbit?d=1&a_re=1.5&a_im=0&n=20").json()
        assert {"s", "right", "left"} <= set(body)
        assert len(body["right"]) >= 1
        for (xr, yr), (xl, yl) in zip(body["right"], body["left"]):
            assert xl == -xr and yl == -yr
        # the a=1.5 right critical point is fixed
        assert len(body["right"]) <= 3

    def test_orbit_bad_params(self, client):
        assert client.get("/api/v1/orbit?d=1&a_re=0&a_im=0").status_code == 400
        assert client.get("/api/v1/orbit?d=1&a_re=1.5&n=0").status_code == 400


class TestRayTimeout:
    def test_exhausted_time_budget_is_504(self):
        # a zero-second budget trips the deadline on the first trace level
        local = TestClient(make_app(ServiceConfig(tile_px=32, ray_timeout=0.0)))
        r = local.get("/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=0/1")
        assert r.status_code == 504
