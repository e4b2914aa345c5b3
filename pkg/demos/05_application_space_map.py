"""
Which codec wins where
======================

Sweeping (lambda, gamma) over a dB grid and keeping the cheapest codec at
each cell gives a map of the application space. The heatmaps are written as
standalone SVG files next to CSV and JSON copies of the numbers.
"""

import sys
import tempfile
from pathlib import Path

from rdcbench import appspace, output, svg
from rdcbench.dataset import load_table1

codecs = load_table1()
grid = appspace.cost_surface(codecs, appspace.GridSpec(), reducer="min", cost_kind="cloud")
best, winners = appspace.best_map(grid)
print("grid:", grid.surfaces.shape, "(codecs, gamma cells, lambda cells)")
print("codecs that win somewhere:", [grid.codec_names[i] for i in winners])

app = appspace.app_calculator(appspace.STREAMING_EXAMPLE)
li = abs(grid.lambda_db_axis - app.db[0]).argmin()
gi = abs(grid.gamma_db_axis - app.db[1]).argmin()
print(f"at the streaming point ({app.db[0]:.2f}, {app.db[1]:.2f}) dB the best codec is",
      grid.codec_names[best[gi, li]])

# cost of one codec relative to another; negative cells favour the first
diff = appspace.grid_difference(grid, "DCVC-FM", "DCVC", domain="db")
print(f"DCVC-FM vs DCVC: {100 * (diff < 0).mean():.1f}% of cells favour DCVC-FM")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="rdc_map_"))
output.write_text(out / "best_map.svg", svg.best_map_svg(grid.lambda_db_axis, grid.gamma_db_axis, best,
                                                        grid.codec_names, "best codec", app.db))
output.write_text(out / "best_map.csv", output.matrix_csv(grid.lambda_db_axis, grid.gamma_db_axis, best))
output.write_text(out / "diff.svg", svg.surface_svg(grid.lambda_db_axis, grid.gamma_db_axis, diff,
                                                    "DCVC-FM - DCVC [dB]", app.db, symmetric=True))
print("wrote", sorted(p.name for p in out.iterdir()), "to", out)
