#include <nlohmann/json.hpp>

#include "migopt/io.hpp"

namespace migopt
{

namespace
{

constexpr const char* kManifest = "dataset.manifest";

void check_name( const std::string& name )
{
  if ( name.empty() || name.find_first_of( "/\\" ) != std::string::npos || name == "." || name == ".." )
  {
    throw std::invalid_argument( "invalid dataset item name `" + name + "`" );
  }
}

} // namespace

void save_dataset( const std::filesystem::path& dir, const Dataset& dataset )
{
  if ( dataset.names.size() != dataset.graphs.size() )
  {
    throw std::invalid_argument( "dataset names and graphs differ in length" );
  }
  std::filesystem::create_directories( dir );
  nlohmann::json items = nlohmann::json::array();
  for ( std::size_t i = 0; i < dataset.graphs.size(); ++i )
  {
    check_name( dataset.names[i] );
    const auto file = dataset.names[i] + ".mig";
    save_mig( dir / file, dataset.graphs[i] );
    items.push_back( { { "name", dataset.names[i] }, { "file", file }, { "size", dataset.graphs[i].size() } } );
  }
  nlohmann::json manifest = {
      { "format", "migopt-dataset" },
      { "version", 1 },
      { "kind", dataset.kind },
      { "seed", dataset.seed },
      { "parameters", dataset.parameters },
      { "count", dataset.graphs.size() },
      { "items", items } };
  write_file( dir / kManifest, manifest.dump( 2 ) + "\n" );
}

Dataset load_dataset( const std::filesystem::path& dir )
{
  const auto path = dir / kManifest;
  nlohmann::json manifest;
  try
  {
    manifest = nlohmann::json::parse( read_file( path ) );
  }
  catch ( const nlohmann::json::parse_error& e )
  {
    throw ParseError( 0, 0, path.string() + ": " + e.what() );
  }
  Dataset d;
  try
  {
    if ( manifest.at( "format" ) != "migopt-dataset" )
    {
      throw ParseError( 0, 0, path.string() + ": not a dataset manifest" );
    }
    d.kind = manifest.at( "kind" ).get<std::string>();
    d.seed = manifest.at( "seed" ).get<std::uint64_t>();
    d.parameters = manifest.at( "parameters" ).get<std::map<std::string, std::int64_t>>();
    const auto& items = manifest.at( "items" );
    if ( items.size() != manifest.at( "count" ).get<std::size_t>() )
    {
      throw ParseError( 0, 0, path.string() + ": item count does not match `count`" );
    }
    for ( const auto& item : items )
    {
      auto name = item.at( "name" ).get<std::string>();
      const auto file = item.at( "file" ).get<std::string>();
      check_name( file );
      d.graphs.push_back( load_mig( dir / file ) );
      d.names.push_back( std::move( name ) );
    }
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw ParseError( 0, 0, path.string() + ": " + e.what() );
  }
  return d;
}

} // namespace migopt
