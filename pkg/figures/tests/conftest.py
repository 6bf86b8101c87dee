import subprocess
import sys

import pytest


def _run_primary(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "lossybloch", *args],
                          cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def small_data(tmp_path_factory):
    """Cheap stand-in datasets: every manifest filename, reduced parameters."""
    d = tmp_path_factory.mktemp("small")
    sp20 = "4.47213595499958"
    cmds = [
        f"spectrum --F 0.3 --gamma-sweep 0:0.4:0.2 --L-small 20 --L-large 30 "
        f"--out fig1_spectrum_F0.3.csv",
        f"spectrum --F 1 --gamma-sweep 0:0.4:0.2 --L-small 20 --L-large 30 "
        f"--out fig1_spectrum_F1.csv",
        f"evolve --mode sp --L 8 --F 0.3 --gamma 0 --init delta:0 --t-final 0.3T "
        f"--dt-out 0.1T --out fig2_unitary_F0.3.csv",
        f"evolve --mode sp --L 8 --F 0.3 --gamma 0.2 --init delta:0 --t-final 0.3T "
        f"--dt-out 0.1T --out fig2_lossy_F0.3.csv",
        f"evolve --mode sp --L 8 --F 1 --gamma 0 --init delta:0 --t-final 0.3T "
        f"--dt-out 0.1T --out fig2_unitary_F1.csv",
        f"evolve --mode sp --L 8 --F 1 --gamma 0.4 --init delta:0 --t-final 0.3T "
        f"--dt-out 0.1T --out fig2_lossy_F1.csv",
        f"bands --gamma 0.05 --k-num 41 --out fig3_bands.csv",
        f"evolve --mode sp --L 12 --F 0.2 --gamma 0.05 --init gaussian:0,0,2 "
        f"--t-final 0.2T --dt-out 0.1T --out fig4_uniform.csv",
        f"evolve --mode sp --L 12 --F 0.2 --gamma-random 0.025,0.125 --seed 7 "
        f"--init gaussian:0,0,2 --t-final 0.2T --dt-out 0.1T --out fig4_random.csv",
        f"nlbands --g 0 --gamma 0.1 --k-num 41 --out fig5_nlbands_g0.csv",
        f"nlbands --g 2 --gamma 0.1 --k-num 41 --out fig5_nlbands_g2.csv",
        f"nlbands --g 7 --gamma 0.1 --k-num 41 --out fig5_nlbands_g7.csv",
        f"bdg --g 2 --gamma 0.1 --k 0 --out fig6_bdg_g2_k0.csv "
        f"--omegas-out fig6_omegas_g2_k0.csv",
        f"bdg --g 2 --gamma 0.1 --k=-0.4pi --out fig6_bdg_g2_km04pi.csv "
        f"--omegas-out fig6_omegas_g2_km04pi.csv",
        f"bdg --g 7 --gamma 0.1 --k 0 --out fig6_bdg_g7_k0.csv "
        f"--omegas-out fig6_omegas_g7_k0.csv",
        f"bdg --g 7 --gamma 0.1 --k=-0.4pi --out fig6_bdg_g7_km04pi.csv "
        f"--omegas-out fig6_omegas_g7_km04pi.csv",
        f"bdg --g 2 --gamma 0.1 --k-num 41 --out fig7_bdg_g2.csv",
        f"bdg --g 7 --gamma 0.1 --k-num 41 --out fig7_bdg_g7.csv",
        f"evolve --mode mf --L 12 --F 0.2 --gamma 0.1 --g 2 "
        f"--init nlbloch:lower,0,0,2 --t-final 0.2T --dt-out 0.1T "
        f"--out fig8_g2_lower.csv",
        f"evolve --mode mf --L 12 --F 0.2 --gamma 0.1 --g 2 "
        f"--init nlbloch:upper,0,0,2 --t-final 0.2T --dt-out 0.1T "
        f"--out fig8_g2_upper.csv",
        f"evolve --mode mf --L 12 --F 0.2 --gamma 0.1 --g 7 "
        f"--init nlbloch:lower,0,0,2 --t-final 0.2T --dt-out 0.1T "
        f"--out fig8_g7_lower.csv",
        f"evolve --mode mf --L 12 --F 0.2 --gamma 0.1 --g 7 "
        f"--init nlbloch:upper,0,0,2 --t-final 0.2T --dt-out 0.1T "
        f"--out fig8_g7_upper.csv",
        f"manybody --N 2 --U 1 --L 4 --F 0.2 --gamma 0.1 "
        f"--init nlbloch:lower,0,0,{sp20} --t-final 0.1T --dt-out 0.05T "
        f"--out fig9_U1_lower.csv",
        f"manybody --N 2 --U 1 --L 4 --F 0.2 --gamma 0.1 "
        f"--init nlbloch:upper,0,0,{sp20} --t-final 0.1T --dt-out 0.05T "
        f"--out fig9_U1_upper.csv",
        f"manybody --N 2 --U 7 --L 4 --F 0.2 --gamma 0.1 "
        f"--init nlbloch:lower,0,0,{sp20} --t-final 0.1T --dt-out 0.05T "
        f"--out fig9_U7_lower.csv",
        f"manybody --N 2 --U 7 --L 4 --F 0.2 --gamma 0.1 "
        f"--init nlbloch:upper,0,0,{sp20} --t-final 0.1T --dt-out 0.05T "
        f"--out fig9_U7_upper.csv",
    ]
    for cmd in cmds:
        _run_primary(cmd.split() + ["--out-dir", str(d)], cwd=d)
    return d


@pytest.fixture(scope="session")
def full_data(tmp_path_factory):
    """The real datasets, regenerated end-to-end through the manifest."""
    d = tmp_path_factory.mktemp("full")
    _run_primary(["manifest", "--run", "--data-dir", str(d)], cwd=d)
    return d
