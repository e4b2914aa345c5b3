"""
From business numbers to (lambda, gamma)
========================================

An application is described by what it pays for bandwidth, hardware and
energy, and by how much revenue is at stake between "good enough" and
"unwatchable" quality. Dividing the currency weights by the distortion
weight gives the point in (lambda, gamma) space where codecs should be
compared.
"""

import dataclasses

from rdcbench.appspace import STREAMING_EXAMPLE, app_calculator

exact = app_calculator(STREAMING_EXAMPLE)
print("HD streaming example")
print(f"  alpha (distortion, rate, complexity) = {tuple(round(a, 2) for a in exact.alpha)}")
print(f"  lambda = {exact.lam:.4f}, gamma = {exact.gamma:.4f}")
print(f"  in dB: ({exact.db[0]:.2f}, {exact.db[1]:.2f})")

# the same model with every intermediate rounded as a hand calculation would
rounded = app_calculator(STREAMING_EXAMPLE, paper_rounding=True)
print(f"  hand-rounded: alpha1 = {rounded.alpha[0]:.2f}, lambda = {rounded.lam:.4f}, gamma = {rounded.gamma:.4f}")

# what moves when the bandwidth price doubles
dearer = app_calculator(dataclasses.replace(STREAMING_EXAMPLE, data_price=0.16))
print(f"data price x2: lambda {exact.lam:.3f} -> {dearer.lam:.3f}, gamma {exact.gamma:.3f} -> {dearer.gamma:.3f}")

# free hardware and energy put the application on the gamma = 0 edge
free = app_calculator(dataclasses.replace(STREAMING_EXAMPLE, gpu_cost=0, energy_price=0))
print(f"free compute: gamma = {free.gamma}, gamma in dB = {free.db[1]}")
