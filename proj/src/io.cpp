#include "weyldyn/io.hpp"

#include <cstdio>

namespace weyldyn {

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_kernel_csv(std::ostream& out, const KernelField& field)
{
    const TriangleGrid& grid = field.grid;
    out << "xi,eta,v\n";
    for (std::size_t j = 0; j <= grid.n; ++j)
        for (std::size_t i = 0; i <= j; ++i)
            out << format_double(grid.h * static_cast<double>(i)) << ','
                << format_double(grid.h * static_cast<double>(j)) << ','
                << format_double(field.at(i, j)) << '\n';
}

void write_wave_csv(std::ostream& out, const WaveTable& table)
{
    out << "x,t,u\n";
    for (std::size_t ix = 0; ix < table.x.size(); ++ix)
        for (std::size_t it = 0; it < table.t.size(); ++it)
            out << format_double(table.x[ix]) << ',' << format_double(table.t[it]) << ','
                << format_double(table.at(ix, it)) << '\n';
}

void write_response_csv(std::ostream& out, const ResponseFunction& r)
{
    out << "t,r\n";
    for (std::size_t m = 0; m < r.samples.size(); ++m)
        out << format_double(r.h_t * static_cast<double>(m)) << ',' << format_double(r.samples[m])
            << '\n';
}

void write_mfunc_csv(std::ostream& out, std::span<const MValue> values)
{
    out << "re_z,im_z,re_m,im_m,route,region\n";
    for (const MValue& v : values)
        out << format_double(v.z.real()) << ',' << format_double(v.z.imag()) << ','
            << format_double(v.m.real()) << ',' << format_double(v.m.imag()) << ','
            << to_string(v.route) << ',' << (v.inside_region ? "inside" : "outside-region") << '\n';
}

void write_weyl_csv(std::ostream& out, std::span<const WeylSample> samples)
{
    out << "re_k,im_k,x,re_u,im_u\n";
    for (const WeylSample& s : samples)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << format_double(s.k.real()) << ',' << format_double(s.k.imag()) << ','
                << format_double(s.x[i]) << ',' << format_double(s.values[i].real()) << ','
                << format_double(s.values[i].imag()) << '\n';
}

} // namespace weyldyn
