#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "cavimag/analysis.hpp"
#include "cavimag/integrator.hpp"

namespace cavimag::csv {

/// %.17g, enough to round-trip any double.
std::string format(double v);

/// Header t,mx,my,mz,gamma,overlap.
void write_timeseries(std::ostream& out, const TimeSeries& series);
TimeSeries read_timeseries(std::istream& in);

/// Header frequency,amplitude (rad/s).
void write_spectrum(std::ostream& out, const Spectrum& spec);
Spectrum read_spectrum(std::istream& in);

/// Header t,re,im,abs.
void write_photon(std::ostream& out, const std::vector<double>& times,
                  const std::vector<std::complex<double>>& alpha);

/// First row: the parameter name then the frequency grid; each further row:
/// the swept value then its amplitudes (nan for failed points).
void write_response_map(std::ostream& out, const ResponseMap& map);

struct MapTable {
    std::string parameter;
    std::vector<double> frequencies;
    std::vector<double> values;
    std::vector<std::vector<double>> amplitudes;
};
MapTable read_response_map(std::istream& in);

/// Per-point status: parameter,ok,n_peaks,omega_minus,omega_plus (two dominant
/// peaks, lower first; nan when absent).
void write_sweep_points(std::ostream& out, const ResponseMap& map);

}  // namespace cavimag::csv
