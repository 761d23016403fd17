#include "dfluid/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace dfluid {

std::string format_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EnergyCsv::EnergyCsv(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    out_ << "step,time,kinetic_energy,max_divergence,newton_iters\n";
}

void EnergyCsv::row(long step, Real time, Real ke, Real max_div, int iters) {
    out_ << step << ',' << format_real(time) << ',' << format_real(ke) << ','
         << format_real(max_div) << ',' << iters << '\n';
    out_.flush();
}

CirculationCsv::CirculationCsv(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    out_ << "step,time,curve_id,circulation,support_size\n";
}

void CirculationCsv::row(long step, Real time, int curve_id, Real circ, Index support) {
    out_ << step << ',' << format_real(time) << ',' << curve_id << ',' << format_real(circ) << ','
         << support << '\n';
    out_.flush();
}

void write_frame(const std::string& path, const VelocityField& A,
                 const std::vector<Form0>& scalars) {
    const MeshGeometry& m = *A.mesh;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    for (Index i = 0; i < m.cell_count; ++i) {
        out << i << ',' << format_real(m.circumcenter[i].x) << ','
            << format_real(m.circumcenter[i].y);
        if (m.dimension == 3) out << ',' << format_real(m.circumcenter[i].z);
        for (const Form0& s : scalars) out << ',' << format_real(s[i]);
        out << '\n';
    }
    for (Index f = 0; f < m.face_count(); ++f)
        out << m.faces[f].i << ',' << m.faces[f].j << ',' << format_real(A.flux[f]) << '\n';
}

VelocityField read_frame_fluxes(const std::string& path, const MeshGeometry& mesh) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    VelocityField A(mesh);
    std::string line;
    // the first cell_count non-empty lines are the per-cell block
    Index skipped = 0, loaded = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (skipped < mesh.cell_count) {
            ++skipped;
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Index i, j;
        Real flux;
        if (!(ss >> i >> j >> flux))
            throw std::runtime_error(path + ": malformed face line '" + line + "'");
        const Index f = mesh.face_between(i, j);
        if (f < 0)
            throw std::runtime_error(path + ": flux between non-adjacent cells " +
                                     std::to_string(i) + " and " + std::to_string(j));
        A.flux[f] = mesh.orientation_sign(f, i) * flux;
        ++loaded;
    }
    if (skipped != mesh.cell_count || loaded != mesh.face_count())
        throw std::runtime_error(path + ": frame does not match the mesh (" +
                                 std::to_string(skipped) + " cells, " + std::to_string(loaded) +
                                 " faces)");
    return A;
}

}  // namespace dfluid
