#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccn/balanced.hpp"
#include "ccn/dynamics.hpp"
#include "ccn/linear.hpp"
#include "ccn/sim.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// File formats.
//
// Graphs, morphisms, and partitions travel as JSON; vectors, trajectories,
// and matrices as CSV with 17 significant digits. Morphism files reference
// their endpoint graphs by path, resolved relative to the morphism file.
// ---------------------------------------------------------------------------

GraphPtr graph_from_json_string(const std::string& text);
GraphPtr read_graph_file(const std::string& path);
std::string graph_to_json_string(const ColoredGraph& g);
void write_graph_file(const std::string& path, const ColoredGraph& g);

GraphMorphism read_morphism_file(const std::string& path);
std::string morphism_to_json_string(const GraphMorphism& phi,
                                    const std::string& domain_path,
                                    const std::string& codomain_path);
void write_morphism_file(const std::string& path, const GraphMorphism& phi,
                         const std::string& domain_path,
                         const std::string& codomain_path);

Partition read_partition_file(const std::string& path, GraphPtr g);
std::string partition_to_json_string(const ColoredGraph& g, const Partition& p);
void write_partition_file(const std::string& path, const ColoredGraph& g,
                          const Partition& p);

/// A field file binds phase dimensions and one module per input-tree class,
/// either all expression modules ("outputs") or all linear modules
/// ("blocks"). Class keys are class ids or printed signatures.
struct FieldFile {
  PhaseDims dims;
  bool linear = false;
  std::optional<VirtualField> smooth;
  std::optional<LinearField> lin;
};

FieldFile read_field_file(const std::string& path, GraphPtr g,
                          const SymmetryOptions& symmetry = {});
FieldFile field_from_json_string(const std::string& text, GraphPtr g,
                                 const SymmetryOptions& symmetry = {});

std::vector<double> read_vector_csv(const std::string& path);
std::string vector_to_csv(const std::vector<double>& x);

std::string trajectory_to_csv(const Trajectory& traj, const SpaceLayout& space);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SpaceLayout& space);

std::string matrix_to_csv(const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ccn
