// outcome: rejected
// check: raw
// A direct translation of the guarded core lookup. The computed read
// converts an object key with its own toString, after the guard ran.
var lookupJS = function(obj, field) {
  if (field === "XMLHttpRequest") { return undefined }
  else { return obj[field] } };
