#include <pybind11/pybind11.h>
PYBIND11_MODULE(qse_sim, m) { m.doc() = "stub"; }
