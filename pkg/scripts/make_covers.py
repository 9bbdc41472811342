"""Regenerate tests/data/covers/*.bmp from scikit-image's sample photographs.

Covers are 256x256 center crops written as uncompressed BMP.
"""

from pathlib import Path

from skimage import data

from stegkit.image_stego import PixelImage, bmp_write

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "covers"
SOURCES = {"camera": data.camera, "moon": data.moon, "astronaut": data.astronaut,
           "coffee": data.coffee, "chelsea": data.chelsea}


def center_crop(img, size=256):
    h, w = img.shape[:2]
    top, left = (h - size) // 2, (w - size) // 2
    return img[top:top + size, left:left + size]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, load in SOURCES.items():
        (OUT / f"{name}.bmp").write_bytes(bmp_write(PixelImage(center_crop(load()))))
        print(name)


if __name__ == "__main__":
    main()
