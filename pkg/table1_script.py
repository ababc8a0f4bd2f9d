"""This example script runs the three estimation contrast presets, writing each under results/"""

# Local imports
from harness import ArtifactHandle, load_config, run_scenario

for preset in ("table1_pdl0", "table1_pdl1", "table1_pdl3"):
    run_scenario(load_config(preset), ArtifactHandle(f"results/{preset}"))
