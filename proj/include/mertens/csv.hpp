#pragma once

// Locale-independent CSV emission for every analysis product. Doubles use
// the shortest round-trip representation, lines end in '\n'.

#include <iosfwd>
#include <string>
#include <vector>

#include "mertens/analysis.hpp"
#include "mertens/emd.hpp"
#include "mertens/spectral.hpp"

namespace mertens::csv {

std::string format_double(double v);

void write_zeros(std::ostream& out, const analysis::ZeroList& zeros);
void write_extrema(std::ostream& out, const std::vector<analysis::ExtremumRecord>& records);
void write_ratios(std::ostream& out, const analysis::RatioSeries& series);
void write_bound_report(std::ostream& out, const analysis::BoundCheckReport& report);
void write_spectrum(std::ostream& out, const spectral::Spectrum& spectrum);
/// `log10f,log10P,fit` over the fitted band.
void write_fit(std::ostream& out, const spectral::Spectrum& spectrum, const spectral::SlopeFit& fit);
void write_envelope(std::ostream& out, const std::vector<spectral::EnvelopeSample>& samples);
/// `n,value` with 1-based n, every `stride`-th sample plus the last.
void write_sequence(std::ostream& out, const std::vector<double>& values, std::size_t stride);
/// `mode,energy,sifts,extrema,zero_crossings` per mode, then residual rows.
void write_emd_manifest(std::ostream& out, const emd::ImfSet& set);

}  // namespace mertens::csv
