#!/usr/bin/env python3
"""Tensor fields and the differential operators in Cartesian coordinates.

Fields carry a valency and a component callback; derivatives fall back to
central finite differences unless analytic partials are declared. The
classical identities rot(grad) = 0 and div(rot) = 0 come out numerically.
"""
import numpy as np

from tensorcalc import (
    Metric,
    TensorField,
    dalembert,
    divergence,
    gradient_vector,
    laplacian,
    nabla,
    parameter_derivative,
    rotor,
)

EUCLID = Metric.euclidean()


def main():
    phi = TensorField.scalar(lambda p: p[0] ** 2 + p[1] ** 2 + p[2] ** 2)
    p = np.array([1.0, -2.0, 0.5])

    grad = gradient_vector(EUCLID, phi)
    print("grad |x|^2 at p:", grad.evaluate_array(p), " expect 2p")
    print("laplacian |x|^2:", laplacian(EUCLID, phi).evaluate(p).item(),
          " expect 6")

    position = TensorField.vector(lambda q: q.copy())
    print("div(position):", divergence(position).evaluate(p).item(),
          " expect 3")

    swirl = TensorField.vector(
        lambda q: np.array([-q[1], q[0], 0.0]))
    print("rot of a rigid swirl:", rotor(EUCLID, swirl).evaluate_array(p),
          " expect (0,0,2)")

    # nabla of a vector field: the new covariant slot comes first
    jac = nabla(position)
    print("\nnabla(position) valency:", jac.valency)
    print("components (identity):\n", jac.evaluate_array(p))

    print("\nrot(grad phi) residual:",
          np.max(np.abs(rotor(EUCLID, grad).evaluate_array(p))))
    print("div(rot swirl) residual:",
          abs(divergence(rotor(EUCLID, swirl)).evaluate(p).item()))

    # a parameter-dependent field: travelling wave killed by the wave operator
    c = 2.0
    wave = TensorField.scalar(lambda q, t: (q[0] - c * t) ** 2,
                              has_parameter=True)
    box = dalembert(c, wave)
    print("\nwave operator on f(x - ct):", box.evaluate(p, t=0.3).item())
    print("time derivative of the wave at t=0.3:",
          parameter_derivative(wave, 0.3).evaluate(p).item(),
          " expect -2c(x - ct) =", -2 * c * (p[0] - c * 0.3))


if __name__ == "__main__":
    main()
