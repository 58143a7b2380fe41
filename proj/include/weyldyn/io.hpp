#pragma once

#include "weyldyn/kernel.hpp"
#include "weyldyn/mvalue.hpp"
#include "weyldyn/spectral.hpp"
#include "weyldyn/wave.hpp"

#include <ostream>
#include <span>
#include <string>

namespace weyldyn {

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double value);

// CSV dumps. Every file starts with a header row; numbers use format_double.

/// xi,eta,v row-major over the triangle (eta outer, xi inner).
void write_kernel_csv(std::ostream& out, const KernelField& field);
/// x,t,u with x outer.
void write_wave_csv(std::ostream& out, const WaveTable& table);
/// t,r
void write_response_csv(std::ostream& out, const ResponseFunction& r);
/// re_z,im_z,re_m,im_m,route,region
void write_mfunc_csv(std::ostream& out, std::span<const MValue> values);
/// re_k,im_k,x,re_u,im_u
void write_weyl_csv(std::ostream& out, std::span<const WeylSample> samples);

} // namespace weyldyn
