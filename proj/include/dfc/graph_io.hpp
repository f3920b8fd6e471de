#ifndef DFC_GRAPH_IO_HPP
#define DFC_GRAPH_IO_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>

#include "dfc/catalog_graph.hpp"

namespace dfc {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-oriented graph description:
//   v <id> <k1> <k2> ...   vertex with integer catalog keys
//   e <id> <id>            undirected edge
// Blank lines and lines starting with '#' are skipped. Edges may precede the
// vertices they name. Keys are tagged with their position on the line.
CatalogGraph read_graph(std::istream& in, std::size_t max_degree = CatalogGraph::kDefaultMaxDegree,
                        std::uint64_t seed = 0x5eed);

void write_graph(std::ostream& out, const CatalogGraph& g);

}  // namespace dfc

#endif
