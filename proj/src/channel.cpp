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

#include "raysense/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "raysense/errors.hpp"

namespace raysense
{

std::complex<double> fresnel_reflection(double theta_i, const Material &m)
{
    if (m.perfect_reflector)
        return {-1.0, 0.0};

    const double er = m.rel_permittivity;
    const double mr = m.rel_permeability;
    const double n = std::sqrt(er * mr);  // refractive index relative to air
    const double z2 = std::sqrt(mr / er); // wave impedance relative to air

    const double cos_i = std::cos(theta_i);
    const double sin_t = std::sin(theta_i) / n;
    const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t * sin_t));

    // Electric field perpendicular to the plane of incidence.
    return {(z2 * cos_i - cos_t) / (z2 * cos_i + cos_t), 0.0};
}

std::complex<double> path_amplitude(const PropagationPath &p, const RadioModel &radio)
{
    if (p.total_length <= 1e-6)
        throw ValidationError("path amplitude: degenerate path, total length must exceed 1e-6 m");

    const double lambda = kSpeedOfLight / radio.center_frequency_hz;
    const double gain = std::pow(10.0, radio.antenna_gain_dbi / 20.0);
    const double tau = p.total_length / kSpeedOfLight;

    std::complex<double> amp =
        std::polar(gain * gain * lambda / (4.0 * M_PI * p.total_length),
                   -2.0 * M_PI * radio.center_frequency_hz * tau);
    for (std::size_t j = 0; j < p.materials.size(); ++j)
        amp *= fresnel_reflection(p.incidence_angles[j], p.materials[j]);
    return amp;
}

CirTaps assemble_cir(std::span<const PropagationPath> paths, const RadioModel &radio,
                     const std::string &tx_id, const std::string &rx_id)
{
    CirTaps cir;
    cir.tx_id = tx_id;
    cir.rx_id = rx_id;
    cir.taps.reserve(paths.size());
    for (const auto &p : paths)
        cir.taps.push_back({p.total_length / kSpeedOfLight, path_amplitude(p, radio)});
    std::stable_sort(cir.taps.begin(), cir.taps.end(),
                     [](const CirTaps::Tap &a, const CirTaps::Tap &b) { return a.delay_s < b.delay_s; });
    return cir;
}

SampledCir sample_bandlimited(const CirTaps &cir, const RadioModel &radio, double t0)
{
    if (!(radio.bandwidth_hz > 0.0))
        throw ValidationError("sampling: bandwidth must be > 0");
    if (radio.num_samples < 2)
        throw ValidationError("sampling: num_samples must be >= 2");

    SampledCir out;
    out.sample_rate_hz = radio.bandwidth_hz;
    out.start_time_s = t0;
    out.tx_id = cir.tx_id;
    out.rx_id = cir.rx_id;
    out.values.assign(radio.num_samples, std::complex<double>{});

    const double fs = out.sample_rate_hz;
    const double t_end = t0 + (radio.num_samples - 1) / fs;
    for (const auto &tap : cir.taps)
    {
        if (tap.delay_s < t0 || tap.delay_s > t_end)
            ++out.truncated_taps;
        for (int n = 0; n < radio.num_samples; ++n)
            out.values[n] += tap.amplitude * sinc(M_PI * fs * (out.sample_time(n) - tap.delay_s));
    }
    return out;
}

void add_noise(SampledCir &cir, double power_linear, std::uint64_t seed)
{
    if (power_linear <= 0.0)
        return;

    // Box-Muller on explicitly mapped 53-bit uniforms. std::mt19937_64 output
    // is specified bit-exactly by the standard; the distribution adapters are
    // not, so the transform is spelled out here to keep files portable.
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }; // (0, 1]

    const double scale = std::sqrt(power_linear / 2.0); // per quadrature component
    for (auto &v : cir.values)
    {
        const double r = std::sqrt(-2.0 * std::log(unit()));
        const double a = 2.0 * M_PI * unit();
        v += std::complex<double>(scale * r * std::cos(a), scale * r * std::sin(a));
    }
}

} // namespace raysense
