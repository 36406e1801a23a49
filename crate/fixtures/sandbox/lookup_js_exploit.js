// outcome: value
// The exploit: the key passes the guard as an object, then names the
// protected field when the lookup converts it.
var lookupJS = function(obj, field) {
  if (field === "XMLHttpRequest") { return undefined }
  else { return obj[field] } };
var evil = { toString: function() { return "XMLHttpRequest" } };
print(typeof lookupJS(window, evil));
