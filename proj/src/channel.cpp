#include "beamopt/channel.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "textio.hpp"

namespace beamopt {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kSpeedOfLight = 299792458.0;
}

void SynthChannelParams::validate() const {
    if (carrier_freq_hz <= 0.0) throw ConfigError("carrier frequency must be > 0");
    if (n_nlos_paths < 0) throw ConfigError("n_nlos_paths must be >= 0");
    if (nlos_excess_loss_db < 0.0) throw ConfigError("nlos excess loss must be >= 0");
    if (shadowing_sigma_db < 0.0) throw ConfigError("shadowing sigma must be >= 0");
    if (los_blockage_prob < 0.0 || los_blockage_prob > 1.0) {
        throw ConfigError("blockage probability must be in [0, 1]");
    }
}

double fspl_db(double distance_m, double freq_hz) {
    double loss =
        20.0 * std::log10(4.0 * M_PI * distance_m * freq_hz / kSpeedOfLight);
    return loss < 0.0 ? 0.0 : loss;
}

Departure departure_toward(const SectorGeometry& sector, const Vec3& target) {
    double dx = target.x - sector.position.x;
    double dy = target.y - sector.position.y;
    double dz = target.z - sector.position.z;
    double dxy = std::hypot(dx, dy);
    double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (dist == 0.0) {
        throw DegenerateGeometry("UE co-located with sector");
    }
    double az = dxy == 0.0 ? 0.0
                           : std::atan2(dy, dx) / kDegToRad -
                                 sector.boresight_az_deg;
    while (az > 180.0) az -= 360.0;
    while (az <= -180.0) az += 360.0;
    double elev = std::atan2(dz, dxy) / kDegToRad;
    return {az, elev, dist};
}

std::vector<LinkPaths> synth_links(const std::vector<SectorGeometry>& sectors,
                                   const std::vector<Vec3>& ue_positions,
                                   const SynthChannelParams& params,
                                   SeededRng& rng) {
    params.validate();
    double wavelength = kSpeedOfLight / params.carrier_freq_hz;
    std::vector<LinkPaths> links;
    links.reserve(sectors.size() * ue_positions.size());
    for (size_t m = 0; m < sectors.size(); ++m) {
        for (size_t k = 0; k < ue_positions.size(); ++k) {
            LinkPaths link;
            link.sector_id = static_cast<int>(m);
            link.ue_id = static_cast<int>(k);
            Departure dep = departure_toward(sectors[m], ue_positions[k]);

            // Fixed draw sequence per link so the stream layout does not
            // depend on outcomes: blockage coin, shadowing unit normal,
            // then 3 draws per NLoS path.
            double block_u = rng.uniform_double();
            double shadow = rng.normal(0.0, 1.0) * params.shadowing_sigma_db;
            bool blocked = block_u < params.los_blockage_prob;
            if (!blocked) {
                PathRecord los;
                los.aod_az_deg = dep.az_deg;
                los.aod_elev_deg = dep.elev_deg;
                double loss = fspl_db(dep.distance_m, params.carrier_freq_hz) +
                              shadow;
                los.pathloss_db = loss < 0.0 ? 0.0 : loss;
                double cycles = dep.distance_m / wavelength;
                double ph = -360.0 * (cycles - std::floor(cycles));
                los.phase_deg = ph < 0.0 ? ph + 360.0 : ph;
                link.paths.push_back(los);
            }
            for (int p = 0; p < params.n_nlos_paths; ++p) {
                double az_pert = rng.uniform_range(-30.0, 30.0);
                double elev_pert = rng.uniform_range(-10.0, 10.0);
                double phase = rng.uniform_range(0.0, 360.0);
                PathRecord nlos;
                nlos.aod_az_deg = dep.az_deg + az_pert;
                nlos.aod_elev_deg = dep.elev_deg + elev_pert;
                double loss = fspl_db(dep.distance_m, params.carrier_freq_hz) +
                              shadow + params.nlos_excess_loss_db;
                nlos.pathloss_db = loss < 0.0 ? 0.0 : loss;
                nlos.phase_deg = phase;
                link.paths.push_back(nlos);
            }
            links.push_back(std::move(link));
        }
    }
    return links;
}

std::vector<std::complex<double>> channel_vector(const ArrayConfig& config,
                                                 const LinkPaths& link) {
    std::vector<std::complex<double>> h(config.n_elements(), {0.0, 0.0});
    for (const auto& path : link.paths) {
        double amp = std::pow(10.0, -path.pathloss_db / 20.0);
        double ph = path.phase_deg * kDegToRad;
        std::complex<double> g = {amp * std::cos(ph), amp * std::sin(ph)};
        auto a = steering_vector(config, path.aod_az_deg, path.aod_elev_deg);
        for (size_t i = 0; i < h.size(); ++i) h[i] += g * a[i];
    }
    return h;
}

namespace {

const char* kRaytraceHeader =
    "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,aod_az_deg,"
    "aod_elev_deg,pathloss_db,phase_deg";
const char* kLocationsHeader = "timestamp,ue_id,x,y,z";

}  // namespace

std::vector<ScenarioSnapshot> load_raytrace(std::istream& in, int n_sectors,
                                            int n_ues) {
    if (n_sectors < 1 || n_ues < 1) {
        throw ConfigError("load_raytrace: declared M and K must be >= 1");
    }
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw EmptyDataset("ray-trace file is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRaytraceHeader) {
        throw ParseError("line 1: unexpected ray-trace header");
    }

    std::vector<ScenarioSnapshot> snaps;
    std::map<long long, size_t> seen;  // timestamp -> snapshot index
    std::vector<std::string> cols;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        textio::split_csv(line, cols);
        if (cols.size() != 11) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 11 columns, got " +
                             std::to_string(cols.size()));
        }
        long long ts = textio::parse_int(cols[0], line_no, "timestamp");
        const std::string& scenario = cols[1];
        int m = static_cast<int>(textio::parse_int(cols[2], line_no, "sector_id"));
        int k = static_cast<int>(textio::parse_int(cols[3], line_no, "ue_id"));
        if (m < 0 || m >= n_sectors) {
            throw IndexError("line " + std::to_string(line_no) +
                             ": sector_id " + std::to_string(m) +
                             " outside declared M=" + std::to_string(n_sectors));
        }
        if (k < 0 || k >= n_ues) {
            throw IndexError("line " + std::to_string(line_no) + ": ue_id " +
                             std::to_string(k) + " outside declared K=" +
                             std::to_string(n_ues));
        }

        auto it = seen.find(ts);
        size_t idx;
        if (it == seen.end()) {
            idx = snaps.size();
            seen.emplace(ts, idx);
            ScenarioSnapshot snap;
            snap.timestamp = ts;
            snap.scenario_id = scenario;
            snap.ue_positions.assign(n_ues, Vec3{});
            snap.links.resize(static_cast<size_t>(n_sectors) * n_ues);
            for (int mm = 0; mm < n_sectors; ++mm) {
                for (int kk = 0; kk < n_ues; ++kk) {
                    auto& l = snap.links[static_cast<size_t>(mm) * n_ues + kk];
                    l.sector_id = mm;
                    l.ue_id = kk;
                }
            }
            snaps.push_back(std::move(snap));
        } else {
            idx = it->second;
            if (idx != snaps.size() - 1) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": rows for timestamp " + std::to_string(ts) +
                                 " are not grouped");
            }
            if (snaps[idx].scenario_id != scenario) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": conflicting scenario_id within timestamp");
            }
        }
        ScenarioSnapshot& snap = snaps[idx];
        snap.ue_positions[k] = {
            textio::parse_double(cols[4], line_no, "ue_x"),
            textio::parse_double(cols[5], line_no, "ue_y"),
            textio::parse_double(cols[6], line_no, "ue_z")};
        PathRecord rec;
        rec.aod_az_deg = textio::parse_double(cols[7], line_no, "aod_az_deg");
        rec.aod_elev_deg = textio::parse_double(cols[8], line_no, "aod_elev_deg");
        rec.pathloss_db = textio::parse_double(cols[9], line_no, "pathloss_db");
        rec.phase_deg = textio::parse_double(cols[10], line_no, "phase_deg");
        if (rec.pathloss_db < 0.0) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": negative pathloss_db");
        }
        snap.links[static_cast<size_t>(m) * n_ues + k].paths.push_back(rec);
    }
    if (snaps.empty()) throw EmptyDataset("ray-trace file has no path rows");
    return snaps;
}

void apply_locations(std::istream& in, std::vector<ScenarioSnapshot>& snaps) {
    std::map<long long, size_t> index;
    for (size_t i = 0; i < snaps.size(); ++i) index[snaps[i].timestamp] = i;
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw EmptyDataset("location file is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kLocationsHeader) {
        throw ParseError("line 1: unexpected location-history header");
    }
    std::vector<std::string> cols;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        textio::split_csv(line, cols);
        if (cols.size() != 5) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 5 columns, got " +
                             std::to_string(cols.size()));
        }
        long long ts = textio::parse_int(cols[0], line_no, "timestamp");
        auto it = index.find(ts);
        if (it == index.end()) continue;  // location rows may cover more steps
        ScenarioSnapshot& snap = snaps[it->second];
        int k = static_cast<int>(textio::parse_int(cols[1], line_no, "ue_id"));
        if (k < 0 || k >= static_cast<int>(snap.ue_positions.size())) {
            throw IndexError("line " + std::to_string(line_no) +
                             ": ue_id outside range");
        }
        snap.ue_positions[k] = {textio::parse_double(cols[2], line_no, "x"),
                                textio::parse_double(cols[3], line_no, "y"),
                                textio::parse_double(cols[4], line_no, "z")};
    }
}

void write_raytrace(std::ostream& out,
                    const std::vector<ScenarioSnapshot>& snaps) {
    out << kRaytraceHeader << '\n';
    for (const auto& snap : snaps) {
        for (const auto& link : snap.links) {
            const Vec3& pos = snap.ue_positions[link.ue_id];
            for (const auto& p : link.paths) {
                out << snap.timestamp << ',' << snap.scenario_id << ','
                    << link.sector_id << ',' << link.ue_id << ','
                    << textio::fmt_double(pos.x) << ','
                    << textio::fmt_double(pos.y) << ','
                    << textio::fmt_double(pos.z) << ','
                    << textio::fmt_double(p.aod_az_deg) << ','
                    << textio::fmt_double(p.aod_elev_deg) << ','
                    << textio::fmt_double(p.pathloss_db) << ','
                    << textio::fmt_double(p.phase_deg) << '\n';
            }
        }
    }
}

void write_locations(std::ostream& out,
                     const std::vector<ScenarioSnapshot>& snaps) {
    out << kLocationsHeader << '\n';
    for (const auto& snap : snaps) {
        for (size_t k = 0; k < snap.ue_positions.size(); ++k) {
            const Vec3& pos = snap.ue_positions[k];
            out << snap.timestamp << ',' << k << ','
                << textio::fmt_double(pos.x) << ','
                << textio::fmt_double(pos.y) << ','
                << textio::fmt_double(pos.z) << '\n';
        }
    }
}

}  // namespace beamopt
