"""Development scratch: compute every derived value before freezing into tests."""
import numpy as np
from scipy.linalg import expm

import qsimflow as qf
from qsimflow.paulis import PauliString, PauliTerm, PauliSum, multiply, to_dense_matrix

print("== 1. (X0 Z1)*(X0 X1) ==")
a = PauliString({0: "X", 1: "Z"})
b = PauliString({0: "X", 1: "X"})
phase, prod = multiply(a, b)
print("phase", phase, "prod", prod)
Ma = to_dense_matrix(PauliSum([PauliTerm(1, a)]), 2)
Mb = to_dense_matrix(PauliSum([PauliTerm(1, b)]), 2)
Mp = to_dense_matrix(PauliSum([PauliTerm(1, prod)]), 2)
print("matrix check:", np.allclose(Ma @ Mb, phase * Mp))

print("\n== 2. Eq.1 N=2 J=1 g=1 eigenvalues ==")
h2 = qf.heisenberg_hamiltonian(qf.HeisenbergParams(1, 1, 1, 0, 2, (0, 1)))
print(sorted(np.linalg.eigvalsh(to_dense_matrix(h2, 2)).round(10)))
print("ground:", qf.exact_ground_energy(h2, 2))

print("\n== 3. Fig.7 deuteron Hamiltonian ground energy ==")
H7 = (5.907 * qf.identity() + 0.21829 * qf.Z(0) - 6.125 * qf.Z(1)
      - 2.1433 * (qf.X(0) * qf.X(1)) - 2.1433 * (qf.Y(0) * qf.Y(1)))
E0 = qf.exact_ground_energy(H7, 2)
print("E0 =", repr(E0))
evs = np.linalg.eigvalsh(to_dense_matrix(H7, 2))
print("all eigs:", evs)

print("\n== 4. N=2 quench m_s(t) = cos(4t) ==")
model2 = qf.create_named_model("Heisenberg", dict(
    Jx=1.0, Jy=1.0, Jz=2.5, h_ext=0.0, num_spins=2, initial_spins=[0, 1],
    observable="staggered_magnetization"))
backend = qf.get_backend()
psi0 = backend.run_statevector(model2.state_prep)
errs = []
for t in np.linspace(0.1, 3.0, 30):
    m = qf.exact_expectation(qf.exact_evolve(model2.hamiltonian, psi0, t), model2.observable)
    errs.append(abs(m - np.cos(4 * t)))
print("max |exact - cos(4t)|:", max(errs))

wf = qf.get_workflow("td-evolution", {"dt": 0.005, "steps": 600})
res = wf.execute(model2)
dev = max(abs(v - np.cos(4 * (k + 1) * 0.005)) for k, v in enumerate(res["exp-vals"]))
print("td workflow max dev from cos(4t):", dev)

print("\n== 5. Trotter primitive CNOT-Rz-CNOT vs expm ==")
dt = 0.17
c = 0.8
circ = qf.Circuit(2, [qf.Gate.cnot(0, 1), qf.Gate.rz(1, 2 * c * dt), qf.Gate.cnot(0, 1)])
U = qf.unitary_of(circ)
ZZ = to_dense_matrix(qf.Z(0) * qf.Z(1), 2)
Uexp = expm(-1j * c * dt * ZZ)
print("exact equal (no phase):", np.allclose(U, Uexp))

step = qf.trotter_step(0.8 * (qf.Z(0) * qf.Z(1)), dt)
print("trotter_step ZZ equal:", np.allclose(qf.unitary_of(step), Uexp))
stepx = qf.trotter_step(0.8 * qf.X(0), dt)
print("trotter_step X equal:", np.allclose(qf.unitary_of(stepx), expm(-1j*0.8*dt*to_dense_matrix(qf.X(0),1))))
stepy = qf.trotter_step(0.8 * qf.Y(0), dt)
print("trotter_step Y equal:", np.allclose(qf.unitary_of(stepy), expm(-1j*0.8*dt*to_dense_matrix(qf.Y(0),1))))
stepxyz = qf.trotter_step(0.5*(qf.X(0)*qf.Y(1)*qf.Z(2)), dt)
print("trotter_step XYZ equal:", np.allclose(qf.unitary_of(stepxyz), expm(-1j*0.5*dt*to_dense_matrix(qf.X(0)*qf.Y(1)*qf.Z(2),3))))

print("\n== 6. basis change conjugation ==")
for letter in ("X", "Y"):
    term = PauliString({0: letter})
    B = qf.unitary_of(qf.basis_change(term, 1))
    P = to_dense_matrix(PauliSum([PauliTerm(1, term)]), 1)
    Zm = to_dense_matrix(qf.Z(0), 1)
    print(letter, "-> Z:", np.allclose(B @ P @ B.conj().T, Zm))

print("\n== 7. QAOA single-edge landscape ==")
cost = 0.5 * (qf.Z(0) * qf.Z(1) - qf.identity())
qc = qf.qaoa_circuit(cost, 1)
best = (0, None)
vals = {}
for gamma in np.linspace(0, np.pi, 41):
    for beta in np.linspace(0, np.pi, 41):
        st = backend.run_statevector(qc.bind([gamma, beta]))
        e = qf.exact_expectation(st, cost)
        vals[(round(gamma, 3), round(beta, 3))] = e
        if e < best[0]:
            best = (e, (gamma, beta))
print("grid min:", best)
# value at gamma=beta=0
st0 = backend.run_statevector(qc.bind([0.0, 0.0]))
print("E(0,0) =", qf.exact_expectation(st0, cost))

model_q = qf.create_custom_model(qf.Circuit.empty(2), cost, 0)
for x0 in ([0.1, 0.1], [0.2, 0.2], [0.4, 0.3]):
    wfq = qf.get_workflow("qaoa", {"p": 1, "x0": x0})
    rq = wfq.execute(model_q)
    print(f"qaoa NM from {x0}: energy={rq['energy']:.6f} evals={rq['n-evals']} conv={rq['converged']}")
wfq = qf.get_workflow("qaoa", {"p": 1})
rq = wfq.execute(model_q)
print(f"qaoa NM default x0: energy={rq['energy']:.6f} evals={rq['n-evals']} conv={rq['converged']}")

print("\n== 8. VQE Fig.7 from theta=0 ==")
gen = -1.0 * (qf.X(0) * qf.Y(1)) + 1.0 * (qf.Y(0) * qf.X(1))
rot = qf.trotter_step(gen, qf.ParameterRef(0, scale=0.5), 2)
ansatz = qf.Circuit(2, (qf.Gate.x(0),), 0).compose(rot)
print("ansatz n_params:", ansatz.n_params, "gates:", len(ansatz))
# check against expm of the generator at a few angles
XY = to_dense_matrix(qf.X(0) * qf.Y(1), 2)
YX = to_dense_matrix(qf.Y(0) * qf.X(1), 2)
for theta in (0.3, -0.9):
    U_ref = expm(0.5j * theta * (XY - YX))
    Ua = qf.unitary_of(rot.bind([theta]))
    print(f"theta={theta}: ansatz rotation == expm:", np.allclose(Ua, U_ref))

model7 = qf.create_custom_model(ansatz, H7, 1)
wf7 = qf.get_workflow("vqe", {})
r7 = wf7.execute(model7)
print(f"vqe energy={r7['energy']!r} evals={r7['n-evals']} conv={r7['converged']} opt={r7['opt-params']}")
print("E0 target:", E0, "delta:", r7["energy"] - E0)
hist = r7["energy-history"]
print("history non-increasing:", all(hist[i+1] <= hist[i] + 1e-15 for i in range(len(hist)-1)))
# energy at theta=0
e0th = qf.evaluate(H7, ansatz.bind([0.0]), backend)
print("E(theta=0) =", e0th, "(expected -0.43629)")

print("\n== 9. Trotter scaling N=3 g=4: ratios ==")
model3 = qf.create_named_model("Heisenberg", dict(
    Jx=1.0, Jy=1.0, Jz=4.0, h_ext=0.0, num_spins=3, initial_spins=[0, 1, 0],
    observable="staggered_magnetization"))
psi3 = backend.run_statevector(model3.state_prep)
devs = {}
for dt_ in (0.1, 0.05, 0.025, 0.0125):
    steps = int(round(1.0 / dt_))
    wft = qf.get_workflow("td-evolution", {"dt": dt_, "steps": steps})
    r = wft.execute(model3)
    times = r["times"]
    ref = qf.exact_observable_series(model3.hamiltonian, psi3, model3.observable, times)
    devs[dt_] = max(abs(np.array(r["exp-vals"]) - ref))
    print(f"dt={dt_}: max dev = {devs[dt_]:.6f}")
print("ratios:", devs[0.1]/devs[0.05], devs[0.05]/devs[0.025], devs[0.025]/devs[0.0125])

print("\n== 10. N=9 dt=0.05 deviations (criterion 3 calibration) ==")
import time
t0 = time.time()
means = {}
for g in (4.0, 0.5):
    m9 = qf.create_named_model("Heisenberg", dict(
        Jx=1.0, Jy=1.0, Jz=g, h_ext=0.0, num_spins=9,
        initial_spins=[0, 1, 0, 1, 0, 1, 0, 1, 0],
        observable="staggered_magnetization"))
    wf9 = qf.get_workflow("td-evolution", {"dt": 0.05, "steps": 60})
    r9 = wf9.execute(m9)
    psi9 = backend.run_statevector(m9.state_prep)
    ref9 = qf.exact_observable_series(m9.hamiltonian, psi9, m9.observable, r9["times"])
    dev9 = max(abs(np.array(r9["exp-vals"]) - ref9))
    means[g] = np.mean(r9["exp-vals"])
    print(f"g={g}: max dev vs exact = {dev9:.4f}, mean m_s = {means[g]:.4f}")
print("mean(g=4) > mean(g=0.5):", means[4.0] > means[0.5])
print("elapsed:", time.time() - t0, "s")

print("\n== 11. shot noise pinned values ==")
plus = qf.Circuit(1, (qf.Gate.h(0),))
cnts = backend.sample(plus, 8192, 12345)
print("freq('0') seed=12345:", cnts.frequency("0"), "dev:", abs(cnts.frequency("0") - 0.5))
est = qf.evaluate(qf.Z(0), plus, backend, qf.EvaluatorConfig.from_shots(8192, seed=7))
print("<Z0> on |+>, shots=8192 seed=7:", est)
stds = {}
for S in (1024, 4096):
    vals_ = [qf.evaluate(qf.Z(0), plus, backend, qf.EvaluatorConfig.from_shots(S, seed=s)) for s in range(100)]
    stds[S] = np.std(vals_)
print("std 1024:", stds[1024], "std 4096:", stds[4096], "ratio:", stds[1024]/stds[4096])

print("\n== 12. backend vs unitary oracle on random circuits ==")
rng = np.random.default_rng(3)
def random_circuit(n, depth):
    gates = []
    for _ in range(depth):
        r = rng.integers(0, 8)
        q = int(rng.integers(0, n))
        if r == 0: gates.append(qf.Gate.h(q))
        elif r == 1: gates.append(qf.Gate.x(q))
        elif r == 2: gates.append(qf.Gate.s(q))
        elif r == 3: gates.append(qf.Gate.rx(q, float(rng.uniform(0, 6.28))))
        elif r == 4: gates.append(qf.Gate.rz(q, float(rng.uniform(0, 6.28))))
        elif r == 5: gates.append(qf.Gate.ry(q, float(rng.uniform(0, 6.28))))
        elif r in (6, 7) and n > 1:
            q2 = int(rng.integers(0, n))
            while q2 == q: q2 = int(rng.integers(0, n))
            gates.append(qf.Gate.cnot(q, q2) if r == 6 else qf.Gate.cz(q, q2))
    return qf.Circuit(n, tuple(gates))
ok = True
for trial in range(10):
    n = int(rng.integers(1, 6))
    c = random_circuit(n, 30)
    sv = backend.run_statevector(c).amplitudes
    ref = qf.unitary_of(c)[:, 0]
    ok &= np.allclose(sv, ref, atol=1e-10)
print("10 random circuits match oracle:", ok)

# raw unitary gate path
m_r = expm(1j * 0.37 * (XY - YX))
c_raw = qf.Circuit(2, (qf.Gate.x(0), qf.Gate.unitary((0, 1), m_r)))
sv = backend.run_statevector(c_raw).amplitudes
ref = qf.unitary_of(c_raw)[:, 0]
print("raw unitary path matches oracle:", np.allclose(sv, ref))
