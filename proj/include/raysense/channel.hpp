// SPDX-License-Identifier: Apache-2.0
//
// raysense - deterministic radio propagation and multipath sensing simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "raysense/raytrace.hpp"
#include "raysense/scene.hpp"

namespace raysense
{

/// Infinite-bandwidth channel impulse response: one complex tap per
/// propagation path. Tap amplitudes are normalized channel voltage gains;
/// TX power is deliberately excluded and enters only as a common scale when
/// a link budget is requested. Delays are strictly positive and sorted
/// ascending.
struct CirTaps
{
    struct Tap
    {
        double delay_s = 0.0;
        std::complex<double> amplitude{};
    };

    std::vector<Tap> taps;
    std::string tx_id;
    std::string rx_id;
};

/// Bandlimited CIR sampled on the uniform grid t_n = start_time + n / sample_rate,
/// n = 0..N-1, with sample_rate equal to the radio bandwidth.
struct SampledCir
{
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    std::vector<std::complex<double>> values;
    std::string tx_id;
    std::string rx_id;
    int truncated_taps = 0; // taps outside the sample window (energy truncation)

    double sample_time(int n) const { return start_time_s + n / sample_rate_hz; }
};

/// Perpendicular-polarization Fresnel reflection coefficient for a ray
/// hitting the material from air at incidence angle theta_i (measured from
/// the surface normal, 0 <= theta_i < pi/2). A perfect reflector returns -1
/// at every angle. |result| <= 1.
std::complex<double> fresnel_reflection(double theta_i, const Material &m);

/// Complex tap amplitude of one path: free-space amplitude law
/// g_tx * g_rx * lambda / (4 pi d) times the product of per-bounce Fresnel
/// coefficients, with carrier phase -2 pi f_c tau. Antenna gains are linear
/// from dBi. Throws ValidationError for degenerate paths (length <= 1e-6 m).
std::complex<double> path_amplitude(const PropagationPath &p, const RadioModel &radio);

/// One tap per path, delay = total_length / c, sorted by delay.
CirTaps assemble_cir(std::span<const PropagationPath> paths, const RadioModel &radio,
                     const std::string &tx_id, const std::string &rx_id);

/// Bandlimited reconstruction: values[n] = sum_k alpha_k * sinc(pi f_s (t_n - tau_k))
/// with sinc(x) = sin(x)/x, sinc(0) = 1 and f_s = radio.bandwidth_hz.
/// Taps outside the sample window are still summed but counted in
/// truncated_taps as a warning-level diagnostic.
SampledCir sample_bandlimited(const CirTaps &cir, const RadioModel &radio, double t0 = 0.0);

/// Additive complex white Gaussian noise with per-sample variance
/// `power_linear`, drawn from a portable Box-Muller generator seeded with
/// `seed`. Identical (cir, power, seed) inputs yield bit-identical output.
void add_noise(SampledCir &cir, double power_linear, std::uint64_t seed);

/// Normalized sinc: sin(x)/x with sinc(0) = 1.
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

} // namespace raysense
