import numpy as np
import pytest

from conftest import PHOTO_COVERS
from stegkit.bitcodec import frame_encode
from stegkit.dct_stego import dct_embed
from stegkit.errors import BadMagic, DimensionMismatch, InsufficientSamples, NoInput
from stegkit.image_stego import PixelImage, bmp_write, lsb_embed, lsb_hide, lsb_reveal
from stegkit.report import AnalysisReport
from stegkit.steganalysis import (AttackClass, analyze_image, analyze_text, classify_attack,
                                  file_size_delta, lsb_chi_square, lsb_scrub, unique_color_count,
                                  visual_diff, whitespace_scan)
from stegkit.text_stego import gap_capacity, gap_embed


def full_capacity(cover, seed):
    return lsb_embed(cover, np.random.default_rng(seed).bytes(cover.size // 8))


def test_visual_diff_identical(covers):
    diff, count = visual_diff(covers["camera"], covers["camera"])
    assert count == 0 and not diff.any()


def test_visual_diff_half_flipped(covers):
    cover = covers["astronaut"]
    n = cover.size
    _, count = visual_diff(cover, full_capacity(cover, 1))
    assert abs(count - n / 2) <= 3 * np.sqrt(n / 4)


def test_visual_diff_equals_lsb_hamming(covers):
    cover = covers["coffee"]
    stego = full_capacity(cover, 2)
    _, count = visual_diff(cover, stego)
    assert count == int(((cover.samples ^ stego.samples) & 1).sum())


def test_visual_diff_mismatch():
    with pytest.raises(DimensionMismatch):
        visual_diff(PixelImage(np.zeros((2, 2, 3), np.uint8)), PixelImage(np.zeros((2, 3, 3), np.uint8)))


def test_file_size_delta(covers):
    cover = covers["camera"]
    raw = bmp_write(cover)
    assert file_size_delta(raw, raw) == 0
    assert file_size_delta(raw, bmp_write(lsb_hide(cover, b"hi"))) == 0
    assert file_size_delta(raw, dct_embed(cover, frame_encode(b"hi")).to_bytes()) != 0


def test_unique_colors():
    assert unique_color_count(PixelImage(np.full((4, 4, 3), 9, np.uint8))) == 1
    assert unique_color_count(PixelImage(np.array([[[1, 2, 3], [3, 2, 1]]], np.uint8))) == 2


def test_unique_colors_increase_on_low_color_image():
    base = np.zeros((32, 32, 3), np.uint8)
    base[:, 16:] = [200, 100, 50]
    cover = PixelImage(base)
    for seed in range(20):
        stego = lsb_embed(cover, np.random.default_rng(seed).bytes(32))
        assert unique_color_count(stego) > unique_color_count(cover)


def test_chi_square_separation(covers):
    for name in PHOTO_COVERS:
        clean = lsb_chi_square(covers[name]).p_value
        stego = lsb_chi_square(full_capacity(covers[name], 3)).p_value
        assert stego > 0.95
        assert stego > clean


def test_chi_square_clean_mostly_low(covers):
    low = [lsb_chi_square(covers[n]).p_value < 0.5 for n in PHOTO_COVERS]
    assert sum(low) >= 3


def test_chi_square_oracle():
    hist_samples = np.repeat(np.arange(4), [100, 50, 30, 70]).astype(np.uint8)
    res = lsb_chi_square(hist_samples, min_samples=1)
    # pairs (100,50) e=75 and (30,70) e=50
    expected = (25 ** 2) / 75 + (20 ** 2) / 50
    assert res.statistic == pytest.approx(expected)
    assert res.dof == 1
    from scipy.stats import chi2
    assert res.p_value == pytest.approx(chi2.sf(expected, 1))


def test_chi_square_insufficient():
    with pytest.raises(InsufficientSamples):
        lsb_chi_square(PixelImage(np.zeros((4, 4, 1), np.uint8)))


def test_whitespace_scan(prose):
    hist, flag = whitespace_scan(prose)
    assert not flag and set(hist) <= {0, 1}
    stego = gap_embed(prose, [1 + i % 3 for i in range(gap_capacity(prose))], ["", "a", "b", "c"])
    _, flag = whitespace_scan(stego)
    assert flag
    hist, flag = whitespace_scan("")
    assert not hist and not flag


def test_classify_attack():
    assert classify_attack(stego=1, cover=2).attack is AttackClass.KNOWN_CARRIER
    assert classify_attack(stego=1).attack is AttackClass.STEGO_ONLY
    assert classify_attack(stego=1, message=b"m").attack is AttackClass.KNOWN_MESSAGE
    assert classify_attack(stego=1, algorithm="lsb").attack is AttackClass.KNOWN_STEGANOGRAPHY
    assert "visual_diff" in classify_attack(stego=1, cover=2).detectors
    assert "visual_diff" not in classify_attack(stego=1).detectors
    with pytest.raises(NoInput):
        classify_attack()


def test_scrub_destroys_payload(covers):
    stego = lsb_hide(covers["chelsea"], b"secret message")
    for seed in range(10):
        with pytest.raises(BadMagic):
            lsb_reveal(lsb_scrub(stego, seed))
    scrubbed = lsb_scrub(stego, 0)
    assert np.array_equal(scrubbed.samples >> 1, stego.samples >> 1)


def test_reports_deterministic_and_serializable(covers):
    cover = covers["camera"]
    stego = full_capacity(cover, 4)
    a = analyze_image(stego, cover)
    b = analyze_image(stego, cover)
    assert a.to_text() == b.to_text()
    assert a["lsb_chi_square_p"].verdict and a["changed_fraction"].verdict
    again = AnalysisReport.from_text(a.to_text())
    assert [r.verdict for r in again.results] == [r.verdict for r in a.results]
    for line in a.to_text().splitlines():
        assert len(line.split("\t")) == 4
    assert not analyze_image(cover)["lsb_chi_square_p"].verdict


def test_analyze_text(prose):
    assert not analyze_text(prose).flagged
    assert analyze_text(gap_embed(prose, [2] * 30, ["", "a", "b"])).flagged
