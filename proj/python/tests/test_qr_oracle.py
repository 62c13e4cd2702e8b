"""Conformance oracle: symbols produced by our encoder must be readable by
an independent third-party decoder (OpenCV's detector), not just by our own
decoder."""

import numpy as np
import pytest

import spivc

cv2 = pytest.importorskip("cv2")


def render(matrix, scale=12, quiet=4):
    """Paint a module matrix as an 8-bit image the way a printout would
    look: bit 1 (light) -> white, bit 0 (dark) -> black, with a quiet zone."""
    side = matrix.shape[0]
    canvas = np.full(((side + 2 * quiet) * scale, (side + 2 * quiet) * scale),
                     255, dtype=np.uint8)
    for r in range(side):
        for c in range(side):
            if matrix[r, c] == 0:
                y, x = (quiet + r) * scale, (quiet + c) * scale
                canvas[y:y + scale, x:x + scale] = 0
    return canvas


@pytest.mark.parametrize(
    "message,version,ec",
    [
        ("OK", 1, "H"),
        ("sampling ratio 2", 2, "M"),
        ("Nanophotonics Research Center", 4, "H"),
        ("deterministic illumination", 3, "Q"),
    ],
)
def test_opencv_reads_our_symbols(message, version, ec):
    sym = spivc.qr_encode(message, version, ec=ec)
    img = render(sym.matrix)
    got, points, _ = cv2.QRCodeDetector().detectAndDecode(img)
    assert points is not None, "detector did not even locate the symbol"
    assert got == message


def test_opencv_and_our_decoder_agree_on_damaged_symbol():
    message = "Nanophotonics Research Center"
    sym = spivc.qr_encode(message, 4, ec="H")
    secret = spivc.ok_glyph(33, 33)
    pair = spivc.encode_shares(sym.matrix, secret, seed=1)

    ours = spivc.qr_decode(pair.key1)
    assert ours["message"] == message
    assert ours["corrected_errors"] > 0  # the key really is damaged

    got, points, _ = cv2.QRCodeDetector().detectAndDecode(render(pair.key1))
    assert points is not None
    assert got == message
