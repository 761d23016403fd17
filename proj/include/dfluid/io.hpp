#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "dfluid/fields.hpp"
#include "dfluid/kelvin.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

// CSV and frame writers; every floating-point value goes out with 17
// significant digits so identical runs produce identical bytes.
std::string format_real(Real v);

class EnergyCsv {
public:
    explicit EnergyCsv(const std::string& path);
    void row(long step, Real time, Real kinetic_energy, Real max_divergence, int newton_iters);

private:
    std::ofstream out_;
};

class CirculationCsv {
public:
    explicit CirculationCsv(const std::string& path);
    void row(long step, Real time, int curve_id, Real circulation, Index support_size);

private:
    std::ofstream out_;
};

// Field dump: per-cell lines "cell_id, cx, cy[, cz], scalar...", then one
// line per oriented face "i, j, F_ij".
void write_frame(const std::string& path, const VelocityField& A,
                 const std::vector<Form0>& scalars);
VelocityField read_frame_fluxes(const std::string& path, const MeshGeometry& mesh);

}  // namespace dfluid
