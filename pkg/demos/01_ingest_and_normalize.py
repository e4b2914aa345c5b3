"""
Ingesting measurements
======================

Raw per-sequence measurements come in bits per pixel and in MSE at the
sequence's own bit depth. Both are brought to a common footing before any
comparison: rates become Mb/s at 1080p30 and MSE is rescaled to 8 bits.
"""

import csv
import io

from rdcbench import dataset

# three sequences measured at one operating point of one codec
raw = io.StringIO(
    "sequence_id,width,height,frame_rate,bit_depth,bits_per_pixel,mse\n"
    "BasketballDrive,1920,1080,50,8,0.031,11.8\n"
    "Jockey,1920,1080,120,10,0.022,120.5\n"
    "Campfire,3840,2160,30,12,0.064,3420.0\n"
)
rows = list(csv.DictReader(raw))
measurements = [
    dataset.RawMeasurement(r["sequence_id"], int(r["width"]), int(r["height"]), float(r["frame_rate"]),
                           int(r["bit_depth"]), float(r["bits_per_pixel"]), float(r["mse"]))
    for r in rows
]

for m in measurements:
    print(f"{m.sequence_id:16s} {dataset.normalize_rate(m):7.3f} Mb/s  "
          f"mse {m.mse:8.1f} -> {dataset.normalize_mse(m):6.2f} (divided by {dataset.mse_scale(m.bit_depth):.0f})")

# averaging gives one (rate, distortion, complexity) point for the codec
point = dataset.aggregate(measurements, complexity=541)
print("aggregated point:", point)

# the bundled fixture holds 17 learned codecs with their decoder complexity;
# the rate/MSE values in it are synthetic placeholders
codecs = dataset.load_table1()
for c in codecs[:5]:
    print(f"{c.name:10s} {c.complexities[0]:6.0f} kMAC/pixel, {len(c)} points")
