"""
End-to-end smoke run over every engine at desk-scale sizes
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.core.brw import BrwSpec, StepLaw, brw_concentration
from app.core.kcol_pde import evolve, init_grid
from app.core.ksat_surface import alpha_d, find_cusp
from app.core.monte_carlo import GeneratorConfig, Model, mc_prob
from app.core.special_models import two_sat_y50, y50_table
from app.core.threshold_tracer import trace
from app.utils.logger import setup_logger

logger = setup_logger(__name__)

def run_pipeline():
    """Run each engine once and print its headline number"""

    print("="*70)
    print("PHASE TRANSITION LAB - PIPELINE CHECK")
    print("="*70)

    print("\nK-SAT surface")
    cusp = find_cusp(3)
    print(f"  alpha_d(3) = {alpha_d(3):.4f}")
    print(f"  cusp(3)    = ({cusp.x0:.4f}, {cusp.z0:.4f})")

    print("\nThreshold curve (dx = 1e-3)")
    curve = trace(3, 1e-3)
    print(f"  alpha_c(3) = {curve.alpha_c:.4f} over {len(curve.points)} points")

    print("\n2-SAT scaling")
    fit = y50_table().regression
    print(f"  y50(100) = {two_sat_y50(100):.4f}; fit C={fit.intercept:.3f} X={fit.coefficient:.3f}")

    print("\nK-COL march")
    _, report = evolve(init_grid(32, 32, (0.02, 0.1), (0.05, 0.1)), 0.1)
    print(f"  reached z={report.z_reached:.4f}, halted={report.halted}, events={len(report.events)}")

    print("\nMonte Carlo")
    estimate = mc_prob(GeneratorConfig(model=Model.KSAT, n=100, density=1.36, k=2), trials=200)
    print(f"  2-SAT n=100 y=1.36: p_hat={estimate.p_hat:.3f} {estimate.ci}")

    print("\nBranching random walk")
    spec = BrwSpec(step=StepLaw.GAUSSIAN, step_scale=4.0, generations=60, population_cap=5000)
    brw = brw_concentration(spec, [1.5, 3.0, 4.5, 6.0, 7.5], 24)
    print(f"  slope={brw.slope:.4e} R^2={brw.r_squared:.3f}")

    print("="*70)
    print("Pipeline check complete")
    print("="*70)

if __name__ == "__main__":
    run_pipeline()
